"""Exact integer linear algebra and full-dimensional lattice polytopes.

Everything here works on plain Python integers (arbitrary precision), so no
determinant or facet normal can overflow.  Points are tuples of ints and
matrices are lists of rows.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

Point = tuple[int, ...]
Matrix = list[list[int]]


class SingularMatrix(ValueError):
    pass


class NotFullDimensional(ValueError):
    pass


# ---------------------------------------------------------------------------
# small integer linear algebra
# ---------------------------------------------------------------------------

def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def sub(a: Sequence[int], b: Sequence[int]) -> Point:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Sequence[int], b: Sequence[int]) -> Point:
    return tuple(x + y for x, y in zip(a, b))


def content(v: Iterable[int]) -> int:
    """gcd of the entries (0 for the zero vector)."""
    return reduce(math.gcd, v, 0)


def primitive(v: Sequence[int]) -> Point:
    g = content(v)
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(x // g for x in v)


def det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = m[k][k]
        rowk = m[k]
        for i in range(k + 1, n):
            rowi = m[i]
            mik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * pk - mik * rowk[j]) // prev
        prev = pk
    return sign * m[n - 1][n - 1]


def rank(vectors: Iterable[Sequence[int]]) -> int:
    """Rank over Q of a list of integer vectors."""
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        p = pr[c]
        for i in range(r + 1, len(rows)):
            ri = rows[i]
            x = ri[c]
            if x:
                for j in range(c, ncols):
                    ri[j] = ri[j] * p - x * pr[j]
        r += 1
        if r == len(rows):
            break
    return r


def affine_dim(points: Sequence[Sequence[int]]) -> int:
    """Dimension of the affine hull (-1 for the empty set)."""
    if not points:
        return -1
    p0 = points[0]
    return rank([sub(p, p0) for p in points[1:]])


def hnf(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Hermite normal form by unimodular row operations.

    Columns of ``M`` are read as lattice vectors, so the row operations are a
    lattice automorphism acting on them.  Returns ``(H, U)`` with ``H = U M``,
    ``|det U| = 1``, ``H`` in row echelon form with positive pivots and every
    entry above a pivot reduced into ``[0, pivot)``.  For a square nonsingular
    ``M`` this is upper triangular with ``prod(diag H) = |det M|``.

    Raises:
        SingularMatrix: if ``M`` is square and singular.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    H = [list(r) for r in M]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        # Euclid on column c below row r
        while True:
            nz = [i for i in range(r, m) if H[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(H[i][c]))
            if piv != r:
                H[r], H[piv] = H[piv], H[r]
                U[r], U[piv] = U[piv], U[r]
            done = True
            for i in range(r + 1, m):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if H[i][c]:
                        done = False
            if done:
                break
        if all(H[i][c] == 0 for i in range(r, m)):
            continue
        if H[r][c] < 0:
            H[r] = [-a for a in H[r]]
            U[r] = [-a for a in U[r]]
        p = H[r][c]
        for i in range(r):
            q = H[i][c] // p
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    if m == n and r < m:
        raise SingularMatrix("matrix is singular")
    return H, U


def snf_invariant_factors(M: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Smith invariant factors ``d_1 | d_2 | ...`` (zeros trailing).

    The number of returned factors is ``min(rows, cols)``.
    """
    A = [list(r) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    out: list[int] = []
    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            out.extend([0] * (min(m, n) - t))
            break
        _, pi, pj = min(nz)
        A[t], A[pi] = A[pi], A[t]
        for row in A:
            row[t], row[pj] = row[pj], row[t]
        while True:
            p = A[t][t]
            changed = False
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    changed = True
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    changed = True
            if changed:
                nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n)
                      if A[i][j] and (i == t or j == t)]
                _, pi, pj = min(nz)
                A[t], A[pi] = A[pi], A[t]
                for row in A:
                    row[t], row[pj] = row[pj], row[t]
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
        out.append(abs(A[t][t]))
        t += 1
    return tuple(out)


def simplex_volume(points: Sequence[Sequence[int]]) -> int:
    """Normalized volume ``|det(1 ... 1; v_1 ... v_{d+1})|`` of a lattice simplex."""
    p0 = points[0]
    return abs(det([sub(p, p0) for p in points[1:]]))


def hyperplane_through(points: Sequence[Point], d: int) -> tuple[Point, int]:
    """Primitive normal ``n`` and offset ``b`` with ``n.x = b`` on ``points``.

    ``points`` must affinely span a hyperplane of Z^d.  Orientation is
    arbitrary; callers fix it.
    """
    q0 = points[0]
    basis: list[Point] = []
    for q in points[1:]:
        v = sub(q, q0)
        if rank(basis + [v]) > len(basis):
            basis.append(v)
            if len(basis) == d - 1:
                break
    if len(basis) != d - 1:
        raise ValueError("points do not span a hyperplane")
    normal = []
    for j in range(d):
        minor = [[row[k] for k in range(d) if k != j] for row in basis]
        normal.append((-1) ** j * det(minor))
    n = primitive(normal)
    return n, dot(n, q0)


# ---------------------------------------------------------------------------
# convex hull (beneath-beyond)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HalfSpace:
    """``normal . x <= offset`` with a primitive integer normal."""

    normal: Point
    offset: int

    def slack(self, x: Sequence[int]) -> int:
        return self.offset - dot(self.normal, x)


class _Facet:
    __slots__ = ("normal", "offset", "pts")

    def __init__(self, normal: Point, offset: int, pts: set[Point]):
        self.normal = normal
        self.offset = offset
        self.pts = pts


def _oriented(normal: Point, offset: int, center: Point, scale: int) -> tuple[Point, int]:
    # center/scale is a strictly interior point
    if dot(normal, center) > scale * offset:
        return tuple(-x for x in normal), -offset
    return normal, offset


def _initial_simplex(pts: Sequence[Point], d: int) -> list[Point]:
    base = [pts[0]]
    vecs: list[Point] = []
    for p in pts[1:]:
        v = sub(p, pts[0])
        if rank(vecs + [v]) > len(vecs):
            vecs.append(v)
            base.append(p)
            if len(base) == d + 1:
                break
    return base


def _beneath_beyond(facets: list[_Facet], p: Point, center: Point, scale: int,
                    d: int) -> list[_Facet] | None:
    """Add ``p`` to the hull given by ``facets``; ``None`` if ``p`` is not beyond any facet."""
    visible = [f for f in facets if dot(f.normal, p) > f.offset]
    if not visible:
        return None
    rest = [f for f in facets if dot(f.normal, p) <= f.offset]
    retained: set[Point] = set()
    for f in facets:
        retained |= f.pts
    new: dict[tuple[Point, int], _Facet] = {}
    for g in rest:
        if dot(g.normal, p) == g.offset:
            g.pts = g.pts | {p}
            new[(g.normal, g.offset)] = g
    for f in visible:
        for g in rest:
            ridge = f.pts & g.pts
            if len(ridge) < d - 1:
                continue
            rl = list(ridge)
            if affine_dim(rl) != d - 2:
                continue
            n, b = hyperplane_through(rl + [p], d)
            n, b = _oriented(n, b, center, scale)
            if (n, b) in new:
                continue
            on = {q for q in retained if dot(n, q) == b}
            on.add(p)
            new[(n, b)] = _Facet(n, b, on)
    out = [g for g in rest if (g.normal, g.offset) not in new]
    out.extend(new.values())
    return out


def _finish(facets: list[_Facet], d: int) -> tuple[tuple[Point, ...], tuple[HalfSpace, ...],
                                                    tuple[frozenset[int], ...]]:
    on: dict[Point, list[Point]] = {}
    for f in facets:
        for q in f.pts:
            on.setdefault(q, []).append(f.normal)
    verts = sorted(q for q, ns in on.items() if len(ns) >= d and rank(ns) == d)
    index = {v: i for i, v in enumerate(verts)}
    order = sorted(facets, key=lambda f: (f.normal, f.offset))
    halfspaces = tuple(HalfSpace(f.normal, f.offset) for f in order)
    incid = tuple(frozenset(index[q] for q in f.pts if q in index) for f in order)
    return tuple(verts), halfspaces, incid


def convex_hull(points: Iterable[Sequence[int]]) -> "LatticePolytope":
    """Convex hull of lattice points as a :class:`LatticePolytope`.

    Raises:
        NotFullDimensional: if the points do not affinely span their ambient space.
    """
    pts = sorted({tuple(p) for p in points})
    if not pts:
        raise NotFullDimensional("no points")
    d = len(pts[0])
    if d == 1:
        lo, hi = pts[0], pts[-1]
        if lo == hi:
            raise NotFullDimensional("single point")
        hs = (HalfSpace((-1,), -lo[0]), HalfSpace((1,), hi[0]))
        return LatticePolytope._make((lo, hi), hs, (frozenset({0}), frozenset({1})))
    base = _initial_simplex(pts, d)
    if len(base) < d + 1:
        raise NotFullDimensional(f"points span dimension {len(base) - 1} < {d}")
    scale = d + 1
    center = tuple(sum(c) for c in zip(*base))
    facets = []
    for i in range(d + 1):
        others = base[:i] + base[i + 1:]
        n, b = hyperplane_through(others, d)
        n, b = _oriented(n, b, center, scale)
        facets.append(_Facet(n, b, set(others)))
    # farthest-first is not needed at this scale; lexicographic order keeps it deterministic
    for p in pts:
        if p in base:
            continue
        res = _beneath_beyond(facets, p, center, scale, d)
        if res is not None:
            facets = res
    verts, hs, incid = _finish(facets, d)
    return LatticePolytope._make(verts, hs, incid)


# ---------------------------------------------------------------------------
# lattice polytope
# ---------------------------------------------------------------------------

class LatticePolytope:
    """A full-dimensional lattice polytope with its H- and V-representation.

    Instances are immutable; derived data (volume, lattice points, edges,
    triangulation) is computed on first access and cached.
    """

    __slots__ = ("dim", "vertices", "facets", "facet_vertices", "_cache")

    def __init__(self, points: Iterable[Sequence[int]]):
        P = convex_hull(points)
        self.dim = P.dim
        self.vertices = P.vertices
        self.facets = P.facets
        self.facet_vertices = P.facet_vertices
        self._cache = {}

    @classmethod
    def _make(cls, vertices, facets, facet_vertices) -> "LatticePolytope":
        self = object.__new__(cls)
        self.dim = len(vertices[0])
        self.vertices = tuple(vertices)
        self.facets = tuple(facets)
        self.facet_vertices = tuple(facet_vertices)
        self._cache = {}
        return self

    def __repr__(self) -> str:
        return f"LatticePolytope({list(self.vertices)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, LatticePolytope) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __reduce__(self):
        return (LatticePolytope, (self.vertices,))

    # -- basic predicates ----------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def is_simplex(self) -> bool:
        return len(self.vertices) == self.dim + 1

    def contains(self, x: Sequence[int]) -> bool:
        return all(dot(h.normal, x) <= h.offset for h in self.facets)

    def contains_strictly(self, x: Sequence[int]) -> bool:
        return all(dot(h.normal, x) < h.offset for h in self.facets)

    # -- derived data --------------------------------------------------------

    def _face_dim(self, face: frozenset[int]) -> int:
        key = ("fdim", face)
        c = self._cache
        if key not in c:
            c[key] = affine_dim([self.vertices[i] for i in face])
        return c[key]

    def _face_facets(self, face: frozenset[int], k: int) -> list[frozenset[int]]:
        """Facets of the ``k``-dimensional face ``face`` as vertex-index sets."""
        if k == self.dim:
            return list(self.facet_vertices)
        out = set()
        for F in self.facet_vertices:
            if face <= F:
                continue
            G = face & F
            if len(G) >= k and G not in out and self._face_dim(G) == k - 1:
                out.add(G)
        # drop non-maximal ones (can only happen through repeated intersections)
        return [G for G in out if not any(G < H for H in out)]

    def face_triangulation(self, face: frozenset[int] | None = None,
                           k: int | None = None) -> list[tuple[int, ...]]:
        """Pulling triangulation of a face into simplices on its vertices.

        Each simplex is a sorted tuple of vertex indices.  With no arguments
        the whole polytope is triangulated.
        """
        if face is None:
            face = frozenset(range(len(self.vertices)))
            k = self.dim
        if k is None:
            k = self._face_dim(face)
        key = ("tri", face)
        c = self._cache
        if key in c:
            return c[key]
        if len(face) == k + 1:
            res = [tuple(sorted(face))]
        else:
            w = min(face)
            res = []
            for G in self._face_facets(face, k):
                if w in G:
                    continue
                for s in self.face_triangulation(G, k - 1):
                    res.append(tuple(sorted(s + (w,))))
        c[key] = res
        return res

    @property
    def volume(self) -> int:
        """Normalized volume ``d! vol(P)``."""
        c = self._cache
        if "vol" not in c:
            V = self.vertices
            c["vol"] = sum(simplex_volume([V[i] for i in s]) for s in self.face_triangulation())
        return c["vol"]

    def facet_simplices(self, facet_index: int) -> list[tuple[int, ...]]:
        F = self.facet_vertices[facet_index]
        return self.face_triangulation(F, self.dim - 1)

    def bounding_box(self) -> tuple[Point, Point]:
        cols = list(zip(*self.vertices))
        return tuple(min(c) for c in cols), tuple(max(c) for c in cols)

    def _enumerate(self, strict: bool) -> list[Point]:
        d = self.dim
        lo, hi = self.bounding_box()
        # the longest axis is solved for directly, the others are looped over
        ax = max(range(d), key=lambda i: hi[i] - lo[i])
        others = [i for i in range(d) if i != ax]
        hs = [(h.normal, h.offset) for h in self.facets]
        out = []
        for rest in itertools.product(*(range(lo[i], hi[i] + 1) for i in others)):
            a, b = lo[ax], hi[ax]
            ok = True
            for n, off in hs:
                r = off - sum(n[i] * x for i, x in zip(others, rest))
                na = n[ax]
                if strict:
                    r -= 1  # n.x <= off - 1 on integers
                if na == 0:
                    if r < 0:
                        ok = False
                        break
                elif na > 0:
                    b = min(b, r // na)
                else:
                    a = max(a, -(r // -na))
                if a > b:
                    ok = False
                    break
            if not ok:
                continue
            for t in range(a, b + 1):
                x = [0] * d
                x[ax] = t
                for i, v in zip(others, rest):
                    x[i] = v
                out.append(tuple(x))
        out.sort()
        return out

    @property
    def lattice_points(self) -> tuple[Point, ...]:
        c = self._cache
        if "pts" not in c:
            c["pts"] = tuple(self._enumerate(False))
        return c["pts"]

    @property
    def interior_points(self) -> tuple[Point, ...]:
        c = self._cache
        if "int" not in c:
            c["int"] = tuple(self._enumerate(True))
        return c["int"]

    def n_lattice_points(self) -> int:
        return len(self.lattice_points)

    def n_interior_points(self) -> int:
        return len(self.interior_points)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as pairs of vertex indices ``(i, j)``, ``i < j``."""
        c = self._cache
        if "edges" not in c:
            n = len(self.vertices)
            inc = [frozenset(k for k, F in enumerate(self.facet_vertices) if i in F)
                   for i in range(n)]
            out = []
            for i in range(n):
                for j in range(i + 1, n):
                    common = inc[i] & inc[j]
                    if len(common) < self.dim - 1:
                        continue
                    face = frozenset(range(n))
                    for k in common:
                        face = face & self.facet_vertices[k]
                    if face == {i, j}:
                        out.append((i, j))
            c["edges"] = tuple(out)
        return c["edges"]

    def neighbors(self, i: int) -> list[int]:
        return [b if a == i else a for a, b in self.edges if i in (a, b)]

    # -- constructions -------------------------------------------------------

    def dilate(self, k: int) -> "LatticePolytope":
        """``kP`` for a positive integer ``k`` (facet normals are reused)."""
        verts = tuple(tuple(k * x for x in v) for v in self.vertices)
        hs = tuple(HalfSpace(h.normal, k * h.offset) for h in self.facets)
        return LatticePolytope._make(verts, hs, self.facet_vertices)

    def translate(self, t: Sequence[int]) -> "LatticePolytope":
        verts = tuple(add(v, t) for v in self.vertices)
        hs = tuple(HalfSpace(h.normal, h.offset + dot(h.normal, t)) for h in self.facets)
        return LatticePolytope._make(verts, hs, self.facet_vertices)

    def visible_facets(self, p: Sequence[int]) -> list[int]:
        return [i for i, h in enumerate(self.facets) if dot(h.normal, p) > h.offset]

    def volume_with(self, p: Sequence[int]) -> int:
        """``Vol(conv(P u {p}))`` without building the new hull."""
        V = self.vertices
        extra = 0
        for i in self.visible_facets(p):
            for s in self.facet_simplices(i):
                extra += simplex_volume([V[j] for j in s] + [tuple(p)])
        return self.volume + extra

    def with_point(self, p: Sequence[int]) -> "LatticePolytope":
        """``conv(P u {p})`` by one beneath-beyond step on the stored facets."""
        p = tuple(p)
        d = self.dim
        if d == 1:
            return convex_hull(list(self.vertices) + [p])
        V = self.vertices
        facets = [_Facet(h.normal, h.offset, {V[i] for i in F})
                  for h, F in zip(self.facets, self.facet_vertices)]
        scale = len(V)
        center = tuple(sum(c) for c in zip(*V))
        res = _beneath_beyond(facets, p, center, scale, d)
        if res is None:
            return self
        verts, hs, incid = _finish(res, d)
        return LatticePolytope._make(verts, hs, incid)
