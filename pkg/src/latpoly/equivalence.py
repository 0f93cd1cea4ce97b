"""Unimodular equivalence and canonical keys.

The canonical form of a polytope is the lexicographically least matrix

    HNF[v_1 - v_0 | v_2 - v_0 | ... | v_{n-1} - v_0]

over all admissible orderings (v_0, ..., v_{n-1}) of its vertices, compared
column by column.  An ordering is admissible when it lists the vertices in
nondecreasing order of an invariant colouring (facet/edge incidence data
refined over the edge graph), which prunes most orderings without losing
invariance.

Because the Hermite form of a column prefix is the prefix of the Hermite
form, the minimum is found level by level: every partial ordering whose
columns so far are not minimal is discarded immediately.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .exact import LatticePolytope, Point, content, det, dot, sub


@dataclass(frozen=True)
class UnimodularMap:
    """``x -> linear . x + translation`` with ``|det linear| = 1``."""

    linear: tuple[tuple[int, ...], ...]
    translation: Point

    def __post_init__(self):
        if abs(det(self.linear)) != 1:
            raise ValueError("linear part is not unimodular")

    def __call__(self, x: Sequence[int]) -> Point:
        return tuple(dot(row, x) + t for row, t in zip(self.linear, self.translation))

    @classmethod
    def identity(cls, d: int) -> "UnimodularMap":
        return cls(tuple(tuple(int(i == j) for j in range(d)) for i in range(d)), (0,) * d)


def random_unimodular_map(d: int, rng: random.Random, steps: int = 12,
                          coeff: int = 3, shift: int = 20) -> UnimodularMap:
    """A random element of GL_d(Z) x Z^d built from elementary operations."""
    A = [[int(i == j) for j in range(d)] for i in range(d)]
    for _ in range(steps):
        op = rng.random()
        if d > 1 and op < 0.7:
            i, j = rng.sample(range(d), 2)
            q = rng.randint(-coeff, coeff)
            A[i] = [a + q * b for a, b in zip(A[i], A[j])]
        elif d > 1 and op < 0.85:
            i, j = rng.sample(range(d), 2)
            A[i], A[j] = A[j], A[i]
        else:
            i = rng.randrange(d)
            A[i] = [-a for a in A[i]]
    t = tuple(rng.randint(-shift, shift) for _ in range(d))
    return UnimodularMap(tuple(tuple(r) for r in A), t)


def apply_map(P: LatticePolytope, t: UnimodularMap) -> LatticePolytope:
    return LatticePolytope([t(v) for v in P.vertices])


# ---------------------------------------------------------------------------
# invariant vertex colouring
# ---------------------------------------------------------------------------

def _relabel(sigs: list) -> list[int]:
    order = {s: i for i, s in enumerate(sorted(set(sigs)))}
    return [order[s] for s in sigs]


def vertex_colours(P: LatticePolytope) -> list[int]:
    """Colour classes of the vertices, invariant under unimodular maps.

    Colours are small integers; equal polytopes under any lattice
    automorphism receive the same colour multiset in corresponding order.
    """
    n = len(P.vertices)
    V = P.vertices
    nbr: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i, j in P.edges:
        g = content(sub(V[i], V[j]))
        nbr[i].append((j, g))
        nbr[j].append((i, g))
    facets = P.facet_vertices
    on = [[k for k, F in enumerate(facets) if i in F] for i in range(n)]
    # lattice distance of every vertex from every facet hyperplane
    slack = [[h.offset - dot(h.normal, v) for v in V] for h in P.facets]
    fcol = _relabel([(len(F), tuple(sorted(row))) for F, row in zip(facets, slack)])
    col = _relabel([(len(on[i]), len(nbr[i]), tuple(sorted(g for _, g in nbr[i])),
                     tuple(sorted((fcol[k], slack[k][i]) for k in range(len(facets)))))
                    for i in range(n)])
    classes = len(set(col))
    while True:
        fcol = _relabel([(fcol[k], tuple(sorted(zip(col, slack[k])))) for k in range(len(facets))])
        new = _relabel([(col[i], tuple(sorted((col[j], g) for j, g in nbr[i])),
                         tuple(sorted((fcol[k], slack[k][i]) for k in range(len(facets)))))
                        for i in range(n)])
        c = len(set(new))
        col = new
        if c == classes:
            break
        classes = c
    return col


# ---------------------------------------------------------------------------
# the search
# ---------------------------------------------------------------------------

def _pivot_ops(x: Sequence[int], r: int, d: int):
    """Row operations putting a new column ``x`` of an echelon prefix of rank ``r`` in Hermite form.

    Returns ``(column, E, r')``; ``E`` is the unimodular matrix of the
    operations (``None`` when ``x`` adds no pivot and nothing changes).
    """
    if r == d or not any(x[r:]):
        return tuple(x), None, r
    E = [[int(i == j) for j in range(d)] for i in range(d)]
    x = list(x)
    while True:
        piv = min((i for i in range(r, d) if x[i]), key=lambda i: abs(x[i]))
        if piv != r:
            x[r], x[piv] = x[piv], x[r]
            E[r], E[piv] = E[piv], E[r]
        p = x[r]
        done = True
        for i in range(r + 1, d):
            if x[i]:
                q = x[i] // p
                x[i] -= q * p
                E[i] = [a - q * b for a, b in zip(E[i], E[r])]
                if x[i]:
                    done = False
        if done:
            break
    if x[r] < 0:
        x[r] = -x[r]
        E[r] = [-a for a in E[r]]
    p = x[r]
    for i in range(r):
        q = x[i] // p
        if q:
            x[i] -= q * p
            E[i] = [a - q * b for a, b in zip(E[i], E[r])]
    return tuple(x), E, r + 1


def _mul(E, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in E)


def canonical_form(P: LatticePolytope) -> tuple[str, tuple[Point, ...]]:
    """Canonical key string and canonical representative vertices of ``P``.

    The representative is the image of ``P`` under the minimizing unimodular
    map; its first vertex is the origin.  The key is
    ``"d;volume;e1;e2;..."`` with the Hermite matrix entries listed column by
    column.
    """
    d = P.dim
    V = P.vertices
    n = len(V)
    col = vertex_colours(P)
    # colour classes in increasing order; slot k of an ordering must come from slot_group[k]
    counts: dict[int, int] = {}
    for c in col:
        counts[c] = counts.get(c, 0) + 1
    slot_group = [c for c in sorted(counts) for _ in range(counts[c])]

    # A search state only needs the transformed images of the vertices not
    # placed yet: two partial orderings with the same images have the same
    # futures.  Orderings related by a lattice automorphism collapse here.
    states: set[tuple[int, tuple]] = set()
    for i in range(n):
        if col[i] != slot_group[0]:
            continue
        rest = tuple(sorted((col[j], sub(V[j], V[i])) for j in range(n) if j != i))
        states.add((0, rest))
    prefix: list[tuple[int, ...]] = []
    level = 1
    while level < n and next(iter(states))[0] < d:
        g = slot_group[level]
        best = None
        winners = []
        for r, rest in states:
            for idx, (c, y) in enumerate(rest):
                if c != g or (idx and rest[idx - 1] == (c, y)):
                    continue
                colv, E, r2 = _pivot_ops(y, r, d)
                if best is not None and colv > best:
                    continue
                if best is None or colv < best:
                    best = colv
                    winners = []
                winners.append((r, rest, idx, E, r2))
        prefix.append(best)
        states = set()
        for r, rest, idx, E, r2 in winners:
            others = rest[:idx] + rest[idx + 1:]
            if E is not None:
                others = tuple(sorted((c, _mul(E, y)) for c, y in others))
            states.add((r2, others))
        level += 1

    if next(iter(states))[0] < d:
        raise ValueError("polytope is not full-dimensional")
    # full rank: nothing changes any more, so the rest is each colour class sorted
    best_tail = min(tuple(y for _, y in rest) for _, rest in states)
    columns = prefix + list(best_tail)
    entries = [str(e) for c in columns for e in c]
    key = ";".join([str(d), str(P.volume)] + entries)
    rep = ((0,) * d,) + tuple(columns)
    return key, rep


def canonical_key(P: LatticePolytope) -> str:
    return canonical_form(P)[0]


def are_equivalent(P: LatticePolytope, Q: LatticePolytope) -> bool:
    if P.dim != Q.dim or P.volume != Q.volume or len(P.vertices) != len(Q.vertices):
        return False
    return canonical_key(P) == canonical_key(Q)


def key_dimension_volume(key: str) -> tuple[int, int]:
    d, v, _ = key.split(";", 2)
    return int(d), int(v)
