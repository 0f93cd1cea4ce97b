"""Enumeration of all lattice polytopes up to a volume bound by growing simplices.

Each polytope is reached from its largest-volume simplex S by adding, one at
a time, lattice points p for which conv(S u {p}) still fits the bound.  The
candidate points are exactly the apexes of corank-one configurations whose
volume vectors end in Vol(S).
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .equivalence import canonical_form
from .exact import LatticePolytope, Point, affine_dim, det, simplex_volume
from .simplices import SimplexCatalog, enumerate_simplices_upto


class DegenerateConfiguration(ValueError):
    pass


class ZeroVolume(ValueError):
    pass


# ---------------------------------------------------------------------------
# corank-one configurations
# ---------------------------------------------------------------------------

def volume_vector(points: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Signed volume vector ``w`` of ``d+2`` points in Z^d.

    ``w_i = (-1)^(i+1) det(1...1; points without p_i)`` (1-based ``i``), so
    ``sum(w) = 0`` and ``sum(w_i p_i) = 0``.
    """
    pts = [tuple(p) for p in points]
    d = len(pts[0])
    if len(pts) != d + 2:
        raise DegenerateConfiguration(f"need {d + 2} points in dimension {d}")
    if affine_dim(pts) < d:
        raise DegenerateConfiguration("points do not span the space")
    w = []
    for i in range(d + 2):
        rest = pts[:i] + pts[i + 1:]
        M = [[1] * (d + 1)] + [[p[k] for p in rest] for k in range(d)]
        w.append((-1) ** i * det(M))
    # (-1)^(i+1) with 1-based i is (-1)^i with 0-based i
    assert sum(w) == 0
    assert all(sum(wi * p[k] for wi, p in zip(w, pts)) == 0 for k in range(d))
    return tuple(w)


@dataclass(frozen=True)
class CorankOneTriangulations:
    positive: tuple[tuple[int, ...], ...]
    negative: tuple[tuple[int, ...], ...]
    positive_volumes: tuple[int, ...]
    negative_volumes: tuple[int, ...]


def corank_one_triangulations(points: Sequence[Sequence[int]]) -> CorankOneTriangulations:
    """The two triangulations of a corank-one configuration.

    Cells are index tuples into ``points``; the positive triangulation has a
    cell ``A - {i}`` for each ``w_i > 0`` and its volume is ``w_i``.
    """
    w = volume_vector(points)
    n = len(w)
    pos = tuple(tuple(j for j in range(n) if j != i) for i in range(n) if w[i] > 0)
    neg = tuple(tuple(j for j in range(n) if j != i) for i in range(n) if w[i] < 0)
    return CorankOneTriangulations(pos, neg, tuple(x for x in w if x > 0),
                                   tuple(-x for x in w if x < 0))


def _vectors(length: int, target: int, lo: int, hi: int, pos_budget: int) -> Iterator[tuple[int, ...]]:
    # integer vectors in [lo, hi]^length with sum == target and positive part <= pos_budget
    if length == 0:
        if target == 0:
            yield ()
        return
    for x in range(lo, hi + 1):
        pb = pos_budget - max(x, 0)
        if pb < 0:
            break
        rest = target - x
        # remaining entries must be able to hit `rest`
        if rest < lo * (length - 1) or rest > min(hi * (length - 1), pb):
            continue
        for tail in _vectors(length - 1, rest, lo, hi, pb):
            yield (x,) + tail


def volume_vector_set(d: int, K: int) -> list[tuple[int, ...]]:
    """All candidate volume vectors of corank-one configurations of volume at most ``K``.

    Integer vectors in ``[-K, K]^(d+2)`` whose positive and negative parts
    both sum to some value in ``1..K``.
    """
    out = []
    n = d + 2
    for v in _vectors(n, 0, -K, K, K):
        if any(x > 0 for x in v):
            out.append(v)
    return out


def volume_vectors_ending_in(d: int, K: int, last: int, bound: int | None = None
                             ) -> Iterator[tuple[int, ...]]:
    """The members of ``volume_vector_set(d, K)`` whose last entry is ``last``.

    ``bound`` additionally caps ``|w_i|`` for every entry.
    """
    b = K if bound is None else min(bound, K)
    for head in _vectors(d + 1, -last, -b, b, K - max(last, 0)):
        yield head + (last,)


class NonLattice:
    """Marker for an apex point with a non-integral coordinate."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "NonLattice"


NON_LATTICE = NonLattice()


def apex_point(simplex: Sequence[Sequence[int]], w: Sequence[int]) -> Point | NonLattice:
    """The point ``p`` with ``w = volume_vector(simplex + [p])`` (up to sign).

    ``w[-1]`` must be the simplex volume.  Returns :data:`NON_LATTICE` if ``p``
    is not integral.
    """
    vol = w[-1]
    if vol == 0:
        raise DegenerateConfiguration("last entry must be the simplex volume")
    d = len(simplex[0])
    out = []
    for k in range(d):
        num = -sum(w[i] * simplex[i][k] for i in range(d + 1))
        q, r = divmod(num, vol)
        if r:
            return NON_LATTICE
        out.append(q)
    return tuple(out)


# ---------------------------------------------------------------------------
# special families
# ---------------------------------------------------------------------------

def unimodular_simplex(d: int) -> LatticePolytope:
    return LatticePolytope([(0,) * d] + [tuple(int(i == j) for j in range(d)) for i in range(d)])


def lattice_pyramid(P: LatticePolytope) -> LatticePolytope:
    """``conv(P x {0} u {e_(d+1)})``."""
    d = P.dim
    return LatticePolytope([v + (0,) for v in P.vertices] + [(0,) * d + (1,)])


def lawrence_prism(heights: Sequence[int]) -> LatticePolytope:
    """``conv(0, a_0 e_d, e_i, e_i + a_i e_d)`` for heights ``a_0, ..., a_(d-1)``."""
    a = list(heights)
    d = len(a)
    if any(x < 0 for x in a):
        raise ValueError("heights must be nonnegative")
    if sum(a) == 0:
        raise ZeroVolume("all heights are zero")
    if d == 1:
        return LatticePolytope([(0,), (a[0],)])
    pts = []
    for i in range(d):
        base = tuple(int(i > 0 and j == i - 1) for j in range(d))
        pts.append(base)
        top = list(base)
        top[d - 1] += a[i]
        pts.append(tuple(top))
    return LatticePolytope(pts)


def exceptional_simplex(d: int) -> LatticePolytope:
    """The (d-2)-fold lattice pyramid over ``2 Delta_2``."""
    P = LatticePolytope([(0, 0), (2, 0), (0, 2)])
    for _ in range(d - 2):
        P = lattice_pyramid(P)
    return P


def lawrence_prisms_upto(d: int, K: int) -> list[LatticePolytope]:
    """One Lawrence prism per height multiset with total height in ``1..K``."""
    out = []
    for total in range(1, K + 1):
        for hs in _partitions(total, d):
            out.append(lawrence_prism(hs))
    return out


def _partitions(n: int, parts: int, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    # nonincreasing tuples of length `parts` (zeros allowed) summing to n
    cap = n if cap is None else cap
    if parts == 0:
        if n == 0:
            yield ()
        return
    for x in range(min(n, cap), -1, -1):
        if x * parts < n:
            break
        for rest in _partitions(n - x, parts - 1, x):
            yield (x,) + rest


# ---------------------------------------------------------------------------
# growth
# ---------------------------------------------------------------------------

def candidate_points(simplex: Sequence[Point], K: int, biggest_only: bool = True) -> list[Point]:
    """Lattice points ``p`` outside the vertex set with ``Vol(conv(S u {p})) <= K``.

    With ``biggest_only`` only points for which ``S`` stays a largest simplex
    of ``S u {p}`` are kept.
    """
    d = len(simplex[0])
    vol = simplex_volume(simplex)
    verts = set(simplex)
    out = set()
    bound = vol if biggest_only else None
    for w in volume_vectors_ending_in(d, K, vol, bound):
        p = apex_point(simplex, w)
        if p is NON_LATTICE or p in verts:
            continue
        out.add(p)
    return sorted(out)


def grow_seed(simplex: Sequence[Point], K: int, biggest_only: bool = True
              ) -> dict[str, tuple[LatticePolytope, tuple[Point, ...]]]:
    """Every polytope ``conv(S u Y)`` with ``Y`` among the candidate points, up to equivalence.

    Returns canonical key -> (one concrete polytope, canonical representative).
    Equivalent intermediate polytopes are expanded only once: if ``Q'`` is
    equivalent to an already seen ``Q``, each extension of ``Q'`` maps to a
    polytope containing ``Q`` that still has ``S`` as a largest simplex, so
    it is reached from ``Q`` anyway.
    """
    S = LatticePolytope(simplex)
    X = candidate_points(S.vertices, K, biggest_only)
    key, rep = canonical_form(S)
    found = {key: (S, rep)}
    seen_vertex_sets = {S.vertices}
    # buckets by volume: adding a point outside P strictly increases it
    buckets: dict[int, list[LatticePolytope]] = {S.volume: [S]}
    for vol in range(S.volume, K):
        for P in buckets.pop(vol, []):
            for x in X:
                if P.contains(x):
                    continue
                nv = P.volume_with(x)
                if nv > K:
                    continue
                Q = P.with_point(x)
                if Q.vertices in seen_vertex_sets:
                    continue
                seen_vertex_sets.add(Q.vertices)
                Q._cache["vol"] = nv
                key, rep = canonical_form(Q)
                if key in found:
                    continue
                found[key] = (Q, rep)
                buckets.setdefault(nv, []).append(Q)
    return found


def classify_seed(simplex: Sequence[Point], K: int, biggest_only: bool = True
                  ) -> dict[str, tuple[Point, ...]]:
    """Canonical key -> representative for every polytope grown from ``simplex``."""
    return {k: rep for k, (_, rep) in grow_seed(simplex, K, biggest_only).items()}


def _classify_job(args):
    key, simplex, K, biggest_only = args
    return key, classify_seed(simplex, K, biggest_only)


def enumerate_polytopes(d: int, K: int, jobs: int = 1, biggest_only: bool = True,
                        skip_seeds: Iterable[str] = (),
                        on_seed: Callable[[str, dict], None] | None = None,
                        catalog: SimplexCatalog | None = None
                        ) -> dict[str, tuple[Point, ...]]:
    """All d-dimensional lattice polytopes of volume at most ``K`` up to equivalence.

    Returns canonical key -> canonical representative.  ``skip_seeds`` and
    ``on_seed`` support checkpointing: seeds whose keys are listed are not
    grown, and ``on_seed(seed_key, classes)`` is called after each seed.
    """
    if d < 1 or K < 1:
        raise ValueError("need d >= 1 and K >= 1")
    seeds = enumerate_simplices_upto(d, K, catalog)
    skip = set(skip_seeds)
    todo = [(k, rep, K, biggest_only) for k, rep in sorted(seeds.items()) if k not in skip]
    result: dict[str, tuple[Point, ...]] = {}

    def merge(seed_key, classes):
        for k, rep in classes.items():
            result.setdefault(k, rep)
        if on_seed is not None:
            on_seed(seed_key, classes)

    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for seed_key, classes in ex.map(_classify_job, todo, chunksize=1):
                merge(seed_key, classes)
    else:
        for job in todo:
            merge(*_classify_job(job))
    for P in lawrence_prisms_upto(d, K):
        key, rep = canonical_form(P)
        result.setdefault(key, rep)
    return result


def counts_by_volume(classes: dict[str, tuple[Point, ...]]) -> dict[int, int]:
    out: dict[int, int] = {}
    for k in classes:
        v = int(k.split(";", 2)[1])
        out[v] = out.get(v, 0) + 1
    return dict(sorted(out.items()))
