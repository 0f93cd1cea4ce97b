"""Lattice-point properties of polytopes: spanning, smooth, very ample, IDP, covers, triangulations.

All predicates are exact.  The two search problems (unimodular triangulation
and unimodular cover) take a node budget and raise ``BudgetExceeded`` when it
runs out; ``analyze`` turns that into a not-computed entry.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .exact import (LatticePolytope, NotFullDimensional, Point, convex_hull, det, dot, hnf,
                    hyperplane_through, primitive, rank, simplex_volume, snf_invariant_factors, sub)


class NotPointed(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class PreconditionViolated(ValueError):
    pass


# ---------------------------------------------------------------------------
# spanning, smooth
# ---------------------------------------------------------------------------

def is_spanning(P: LatticePolytope) -> bool:
    pts = P.lattice_points
    diffs = [sub(p, pts[0]) for p in pts[1:]]
    # d x (n-1) matrix with the differences as columns
    M = [list(col) for col in zip(*diffs)]
    return all(f == 1 for f in snf_invariant_factors(M))


def primitive_edge_directions(P: LatticePolytope, i: int) -> list[Point]:
    v = P.vertices[i]
    return [primitive(sub(P.vertices[j], v)) for j in P.neighbors(i)]


def is_smooth(P: LatticePolytope) -> bool:
    d = P.dim
    for i in range(len(P.vertices)):
        dirs = primitive_edge_directions(P, i)
        if len(dirs) != d or abs(det(dirs)) != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# cones and Hilbert bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cone:
    apex: Point
    generators: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(primitive(g) for g in self.generators))


def _adjugate(G: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(G)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[G[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            adj[j][i] = (-1) ** (i + j) * det(minor)
    return adj


def parallelepiped_points(rays: Sequence[Point]) -> list[Point]:
    """Nonzero lattice points of the half-open parallelepiped spanned by ``rays``."""
    d = len(rays)
    G = [[rays[j][i] for j in range(d)] for i in range(d)]  # rays as columns
    D = det(G)
    if D == 0:
        raise ValueError("rays are linearly dependent")
    sign = 1 if D > 0 else -1
    D = abs(D)
    if D == 1:
        return []
    A = _adjugate(G)
    # rows of H span the same lattice as the rays; its diagonal bounds a box of coset representatives
    H, _ = hnf([list(r) for r in rays])
    diag = [H[i][i] for i in range(d)]
    out = []
    for y in itertools.product(*(range(t) for t in diag)):
        if not any(y):
            continue
        mu = [(sign * sum(a * b for a, b in zip(row, y))) % D for row in A]
        x = tuple(sum(G[i][j] * mu[j] for j in range(d)) // D for i in range(d))
        out.append(x)
    return out


def _reduce_to_basis(candidates: set[Point], inside) -> list[Point]:
    # keep the elements that are not a candidate plus a nonzero cone point
    cands = sorted(candidates, key=lambda p: (sum(abs(x) for x in p), p))
    basis = []
    for x in cands:
        if not any(inside(sub(x, y)) for y in cands if y != x):
            basis.append(x)
    return sorted(basis)


def _cone_data(Q: LatticePolytope, apex_index: int):
    """Simplicial cones and inequalities of the tangent cone of ``Q`` at a vertex."""
    v = Q.vertices[apex_index]
    cones = []
    for k, F in enumerate(Q.facet_vertices):
        if apex_index in F:
            continue
        for s in Q.face_triangulation(F, Q.dim - 1):
            cones.append([primitive(sub(Q.vertices[j], v)) for j in s])
    normals = [h.normal for h, F in zip(Q.facets, Q.facet_vertices) if apex_index in F]
    return cones, normals


def _hilbert_from(cones, normals) -> list[Point]:
    cands: set[Point] = set()
    for rays in cones:
        cands.update(rays)
        cands.update(parallelepiped_points(rays))

    def inside(x):
        return any(x) and all(dot(n, x) <= 0 for n in normals)

    return _reduce_to_basis(cands, inside)


def hilbert_basis(c: Cone) -> list[Point]:
    """Minimal generating set of the monoid ``c n Z^d`` (vectors relative to the apex)."""
    d = len(c.apex)
    if rank(c.generators) < d:
        raise NotFullDimensional("cone is not full-dimensional")
    origin = (0,) * d
    Q = convex_hull([origin] + list(c.generators))
    if origin not in Q.vertices:
        raise NotPointed("cone is not pointed")
    cones, normals = _cone_data(Q, Q.vertices.index(origin))
    return _hilbert_from(cones, normals)


def tangent_cone(P: LatticePolytope, i: int) -> Cone:
    return Cone(P.vertices[i], tuple(primitive_edge_directions(P, i)))


def is_very_ample(P: LatticePolytope) -> bool:
    d = P.dim
    for i, v in enumerate(P.vertices):
        dirs = primitive_edge_directions(P, i)
        if len(dirs) == d and abs(det(dirs)) == 1:
            continue  # unimodular cone: the edge directions are lattice points of P - v
        cones, normals = _cone_data(P, i)
        for h in _hilbert_from(cones, normals):
            if not P.contains(tuple(a + b for a, b in zip(v, h))):
                return False
    return True


# ---------------------------------------------------------------------------
# IDP
# ---------------------------------------------------------------------------

def idp_degrees(d: int, max_degree: int | None = None) -> range:
    top = max(2, d - 1) if max_degree is None else max_degree
    return range(2, top + 1)


def is_idp(P: LatticePolytope, max_degree: int | None = None) -> bool:
    """Every lattice point of ``kP`` is a lattice point of ``(k-1)P`` plus one of ``P``.

    Checked for ``k = 2 .. max(2, d-1)`` unless ``max_degree`` is given.
    """
    base = P.lattice_points
    prev = set(base)
    for k in idp_degrees(P.dim, max_degree):
        sums = {tuple(a + b for a, b in zip(x, y)) for x in prev for y in base}
        target = P.dilate(k).lattice_points
        if len(sums) != len(target) or any(t not in sums for t in target):
            return False
        prev = sums
    return True


# ---------------------------------------------------------------------------
# unimodular simplices, triangulations, covers
# ---------------------------------------------------------------------------

def enumerate_unimodular_subsimplices(P: LatticePolytope) -> list[tuple[Point, ...]]:
    """All unimodular d-simplices with vertices among the lattice points of ``P``."""
    pts = P.lattice_points
    d = P.dim
    out = []
    for combo in itertools.combinations(range(len(pts)), d + 1):
        S = [pts[i] for i in combo]
        if simplex_volume(S) == 1:
            out.append(tuple(S))
    return out


def _affine_kernel(points: Sequence[Point]) -> list[list[Fraction]]:
    """Basis of the affine dependences ``sum l_i p_i = 0, sum l_i = 0``."""
    m = len(points)
    d = len(points[0])
    rows = [[Fraction(1)] * m] + [[Fraction(p[k]) for p in points] for k in range(d)]
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * m
        vec[f] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -rows[i][f]
        basis.append(vec)
    return basis


def _improper_by_circuits(s: tuple[Point, ...], t: tuple[Point, ...]) -> bool:
    """Exact test: do the simplices ``s`` and ``t`` fail to meet in a common face?

    They do iff some circuit of ``s u t`` is nonnegative on ``s - t`` and
    nonpositive on ``t - s`` (or the reverse sign pattern).
    """
    S, T = set(s), set(t)
    only_s = S - T
    only_t = T - S
    pts = sorted(S | T)
    d = len(pts[0])
    for size in range(2, d + 3):
        for Z in itertools.combinations(pts, size):
            if not (set(Z) & only_s and set(Z) & only_t):
                continue
            ker = _affine_kernel(list(Z))
            if len(ker) != 1 or any(x == 0 for x in ker[0]):
                continue
            lam = dict(zip(Z, ker[0]))
            for sgn in (1, -1):
                if all(sgn * lam[p] >= 0 for p in Z if p in only_s) and \
                        all(sgn * lam[p] <= 0 for p in Z if p in only_t):
                    return True
    return False


class _SimplexData:
    __slots__ = ("pts", "facets")

    def __init__(self, pts: tuple[Point, ...]):
        self.pts = pts
        d = len(pts[0])
        self.facets = []
        for i in range(d + 1):
            others = pts[:i] + pts[i + 1:]
            n, b = hyperplane_through(list(others), d)
            if dot(n, pts[i]) > b:
                n, b = tuple(-x for x in n), -b
            self.facets.append((n, b, frozenset(others)))

    def contains_rational(self, x) -> bool:
        return all(sum(a * c for a, c in zip(n, x)) <= b for n, b, _ in self.facets)


def _proper(a: _SimplexData, b: _SimplexData) -> bool:
    for X, Y in ((a, b), (b, a)):
        for n, off, on in X.facets:
            if all(dot(n, p) >= off for p in Y.pts):
                # Y lies beyond this facet hyperplane of X
                if all(p in X.pts for p in Y.pts if dot(n, p) == off):
                    return True
                break
    return not _improper_by_circuits(a.pts, b.pts)


def _generic_interior_point(P: LatticePolytope, simplices: list[_SimplexData]) -> tuple[Fraction, ...]:
    d = P.dim
    n = len(P.vertices)
    centroid = [Fraction(sum(v[k] for v in P.vertices), n) for k in range(d)]
    hyperplanes = {(nrm, b) for S in simplices for nrm, b, _ in S.facets}
    for scale in itertools.count(1):
        eps = Fraction(1, 97 * scale + 13)
        c = tuple(centroid[k] + eps ** (k + 1) for k in range(d))
        if any(sum(a * x for a, x in zip(nrm, c)) == b for nrm, b in hyperplanes):
            continue
        if all(sum(a * x for a, x in zip(h.normal, c)) < h.offset for h in P.facets):
            return c
    raise AssertionError("unreachable")


def has_unimodular_triangulation(P: LatticePolytope, budget: int = 200_000) -> bool:
    """Backtracking search for a triangulation into unimodular simplices.

    Cells are added across the open interior facets of the partial
    triangulation, always at the facet with the fewest compatible options.
    Raises :class:`BudgetExceeded` after ``budget`` search nodes.
    """
    d = P.dim
    simplices = [_SimplexData(s) for s in enumerate_unimodular_subsimplices(P)]
    if not simplices:
        return False
    if len(P.vertices) == d + 1 and P.volume == 1:
        return True
    # which P-facets each point lies on, to recognize boundary faces
    on_facets = {p: frozenset(k for k, h in enumerate(P.facets) if dot(h.normal, p) == h.offset)
                 for p in P.lattice_points}

    def on_boundary(face: frozenset) -> bool:
        it = iter(face)
        common = on_facets[next(it)]
        for p in it:
            common = common & on_facets[p]
            if not common:
                return False
        return bool(common)

    by_face: dict[frozenset, list[int]] = {}
    for idx, S in enumerate(simplices):
        for _, _, F in S.facets:
            by_face.setdefault(F, []).append(idx)
    boundary = {F: on_boundary(F) for F in by_face}

    compat: dict[tuple[int, int], bool] = {}

    def ok(i: int, j: int) -> bool:
        key = (i, j) if i < j else (j, i)
        if key not in compat:
            compat[key] = _proper(simplices[i], simplices[j])
        return compat[key]

    c = _generic_interior_point(P, simplices)
    start = [i for i, S in enumerate(simplices) if S.contains_rational(c)]
    nodes = 0
    target = P.volume
    chosen: list[int] = []
    open_faces: dict[frozenset, int] = {}

    def place(i):
        chosen.append(i)
        changed = []
        for _, _, F in simplices[i].facets:
            if boundary[F]:
                continue
            if F in open_faces:
                changed.append((F, open_faces.pop(F)))
            else:
                open_faces[F] = i
                changed.append((F, None))
        return changed

    def unplace(changed):
        chosen.pop()
        for F, owner in reversed(changed):
            if owner is None:
                del open_faces[F]
            else:
                open_faces[F] = owner

    def search() -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"triangulation search exceeded {budget} nodes")
        if not open_faces:
            return True
        if len(chosen) >= target:
            return False
        best = None
        for F, owner in open_faces.items():
            opts = [j for j in by_face[F]
                    if j != owner and j not in chosen and all(ok(j, k) for k in chosen)]
            if best is None or len(opts) < len(best):
                best = opts
                if not opts:
                    return False
        for j in best:
            changed = place(j)
            if search():
                return True
            unplace(changed)
        return False

    for i in start:
        changed = place(i)
        if search():
            return True
        unplace(changed)
    return False


def _split(points: list[tuple[Fraction, ...]], n: Point, b: int):
    inner, outer = [], []
    vals = [sum(a * x for a, x in zip(n, p)) - b for p in points]
    for p, v in zip(points, vals):
        if v <= 0:
            inner.append(p)
        if v >= 0:
            outer.append(p)
    for (p, vp), (q, vq) in itertools.combinations(zip(points, vals), 2):
        if (vp < 0 < vq) or (vq < 0 < vp):
            t = vp / (vp - vq)
            x = tuple(a + t * (c - a) for a, c in zip(p, q))
            inner.append(x)
            outer.append(x)
    return _vertices_only(inner), _vertices_only(outer)


def _vertices_only(points: list[tuple[Fraction, ...]]) -> list[tuple[Fraction, ...]]:
    pts = list(set(points))
    den = lcm(*(x.denominator for p in pts for x in p))
    scaled = {tuple(int(x * den) for x in p): p for p in pts}
    hull = convex_hull(list(scaled))
    return [scaled[v] for v in hull.vertices]


def has_unimodular_cover(P: LatticePolytope, budget: int = 200_000) -> bool:
    """Is ``P`` the union of its unimodular lattice subsimplices?

    Cells of a triangulation of ``P`` are refined along facet hyperplanes of
    the unimodular simplices until each cell lies in one simplex, or a cell
    with a point outside all of them turns up.
    """
    simplices = [_SimplexData(s) for s in enumerate_unimodular_subsimplices(P)]
    if not simplices:
        return False
    V = P.vertices
    work = [[tuple(Fraction(x) for x in V[i]) for i in s] for s in P.face_triangulation()]
    nodes = 0
    while work:
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"unimodular cover search exceeded {budget} cells")
        cell = work.pop()
        if any(all(S.contains_rational(p) for p in cell) for S in simplices):
            continue
        m = len(cell)
        c = tuple(sum(p[k] for p in cell) / m for k in range(P.dim))
        holders = [S for S in simplices if S.contains_rational(c)]
        if not holders:
            return False
        S = holders[0]
        for n, b, _ in S.facets:
            if any(sum(a * x for a, x in zip(n, p)) > b for p in cell):
                work.extend(_split(cell, n, b))
                break
    return True


# ---------------------------------------------------------------------------
# smooth polytopes with few lattice points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmoothStructure:
    kind: str  # "UnimodularSimplex", "LawrencePrism" or "Contradiction"
    heights: tuple[int, ...] = ()


def smooth_structure(P: LatticePolytope) -> SmoothStructure:
    """Identify a smooth polytope with at most ``3d-4`` lattice points.

    Such a polytope is a unimodular simplex or a Lawrence prism whose
    heights are all positive and sum to at most ``2d-4``.
    """
    from .equivalence import canonical_key
    from .growth import lawrence_prism

    d = P.dim
    if not is_smooth(P) or len(P.lattice_points) > 3 * d - 4:
        raise PreconditionViolated("needs a smooth polytope with at most 3d-4 lattice points")
    if P.volume == 1 and len(P.vertices) == d + 1:
        return SmoothStructure("UnimodularSimplex")
    if len(P.vertices) == 2 * d:
        key = canonical_key(P)
        V = P.vertices
        # the prism direction joins paired vertices; try every edge direction
        for i, j in P.edges:
            e = primitive(sub(V[j], V[i]))
            lines: dict[tuple, list[int]] = {}
            for v in V:
                # invariant of the line through v with direction e
                k = next(idx for idx, x in enumerate(e) if x)
                t = v[k] // e[k] if e[k] > 0 else -((-v[k]) // -e[k])
                lines.setdefault(tuple(a - t * b for a, b in zip(v, e)), []).append(v)
            if len(lines) != d or any(len(ps) != 2 for ps in lines.values()):
                continue
            heights = sorted(abs(sub(ps[0], ps[1])[k]) // abs(e[k])
                             for ps in lines.values() for k in [next(i for i, x in enumerate(e) if x)])
            if all(h >= 1 for h in heights) and sum(heights) <= 2 * d - 4 and \
                    canonical_key(lawrence_prism(heights)) == key:
                return SmoothStructure("LawrencePrism", tuple(sorted(heights, reverse=True)))
    return SmoothStructure("Contradiction")


# ---------------------------------------------------------------------------
# named examples
# ---------------------------------------------------------------------------

def segmental_q(k: int) -> LatticePolytope:
    if k < 0:
        raise ValueError("k >= 0")
    return LatticePolytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (0, 1, 1),
                            (1, 1, k), (1, 1, k + 1)])


def separating_examples() -> dict[str, LatticePolytope]:
    """Smallest 3-polytopes separating consecutive properties of the hierarchy."""
    return {
        "spanning-not-va": LatticePolytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 3)]),
        "va-not-idp": LatticePolytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2), (1, 1, 3),
                                       (1, 0, -1), (0, 1, -1), (0, 0, 1)]),
        "uc-not-ut": LatticePolytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1),
                                      (1, 2, -1), (3, 1, -1), (-2, -1, 1)]),
    }


# ---------------------------------------------------------------------------
# records
# ---------------------------------------------------------------------------

PROPERTY_NAMES = ("spanning", "smooth", "va", "idp", "uc", "ut")
_FIELD = {"spanning": "spanning", "smooth": "smooth", "va": "very_ample", "idp": "idp",
          "uc": "unimodular_cover", "ut": "unimodular_triangulation"}


@dataclass
class PropertyRecord:
    """Tri-state flags: ``True``, ``False`` or ``None`` for not computed."""

    spanning: bool | None = None
    very_ample: bool | None = None
    idp: bool | None = None
    unimodular_cover: bool | None = None
    unimodular_triangulation: bool | None = None
    smooth: bool | None = None

    def get(self, short: str) -> bool | None:
        return getattr(self, _FIELD[short])

    def hierarchy_violations(self) -> list[str]:
        """Broken implications among computed flags (UT => UC => IDP => VA => spanning)."""
        chain = ["ut", "uc", "idp", "va", "spanning"]
        bad = []
        for a, b in zip(chain, chain[1:]):
            if self.get(a) is True and self.get(b) is False:
                bad.append(f"{a}=>{b}")
        if self.smooth is True and self.spanning is False:
            bad.append("smooth=>spanning")
        return bad

    def as_row(self) -> list[str]:
        """Flags in ``PROPERTY_NAMES`` order as ``1``/``0``/blank."""
        out = []
        for name in PROPERTY_NAMES:
            v = self.get(name)
            out.append("" if v is None else str(int(v)))
        return out


def analyze(P: LatticePolytope, props: Sequence[str] = PROPERTY_NAMES, budget: int = 200_000,
            idp_max_degree: int | None = None) -> PropertyRecord:
    """Compute the requested properties independently; searches over budget stay ``None``."""
    rec = PropertyRecord()
    for name in props:
        if name not in _FIELD:
            raise ValueError(f"unknown property {name!r}")
        try:
            if name == "spanning":
                val = is_spanning(P)
            elif name == "smooth":
                val = is_smooth(P)
            elif name == "va":
                val = is_very_ample(P)
            elif name == "idp":
                val = is_idp(P, idp_max_degree)
            elif name == "uc":
                val = has_unimodular_cover(P, budget)
            else:
                val = has_unimodular_triangulation(P, budget)
        except BudgetExceeded:
            val = None
        setattr(rec, _FIELD[name], val)
    return rec
