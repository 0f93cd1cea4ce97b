"""Ehrhart polynomials, h*-vectors, special simplex families and h*-inequality checkers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .exact import LatticePolytope, Point


class NegativeCoefficient(ArithmeticError):
    """An h*-coefficient came out negative, which signals a counting bug."""


@dataclass(frozen=True)
class HStarVector:
    coefficients: tuple[int, ...]

    @property
    def degree(self) -> int:
        return max(i for i, h in enumerate(self.coefficients) if h)

    def __getitem__(self, i: int) -> int:
        return self.coefficients[i]

    def __len__(self) -> int:
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def __eq__(self, other) -> bool:
        if isinstance(other, HStarVector):
            return self.coefficients == other.coefficients
        return self.coefficients == tuple(other)

    def __hash__(self):
        return hash(self.coefficients)

    def __repr__(self) -> str:
        return f"HStarVector{self.coefficients}"


def dilation_counts(P: LatticePolytope, tmax: int, interior: bool = False) -> list[int]:
    """``|tP n Z^d|`` (or interior counts) for ``t = 0..tmax``; t = 0 counts the origin only."""
    out = [0 if interior else 1]
    for t in range(1, tmax + 1):
        Q = P.dilate(t)
        out.append(len(Q.interior_points) if interior else len(Q.lattice_points))
    return out


def _interpolate(values: Sequence[int]) -> list[Fraction]:
    # coefficients (constant first) of the polynomial through (t, values[t])
    n = len(values)
    coeffs = [Fraction(0)] * n
    for i, y in enumerate(values):
        # Lagrange basis polynomial for node i
        basis = [Fraction(1)]
        denom = 1
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= j * basis[k + 1]
            denom *= i - j
        for k in range(n):
            coeffs[k] += Fraction(y, denom) * basis[k]
    return coeffs


@dataclass(frozen=True)
class EhrhartPolynomial:
    coefficients: tuple[Fraction, ...]

    def __call__(self, t: int) -> Fraction:
        return sum((c * t ** k for k, c in enumerate(self.coefficients)), Fraction(0))


def ehrhart_polynomial(P: LatticePolytope) -> EhrhartPolynomial:
    d = P.dim
    ehr = EhrhartPolynomial(tuple(_interpolate(dilation_counts(P, d))))
    assert ehr.coefficients[-1] * _factorial(d) == P.volume
    return ehr


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def h_star_from_counts(d: int, counts: Sequence[int]) -> HStarVector:
    """Binomial transform of ``ehr(0..d)`` into ``(h*_0, ..., h*_d)``."""
    h = []
    for j in range(d + 1):
        h.append(sum((-1) ** i * comb(d + 1, i) * counts[j - i] for i in range(j + 1)))
    if any(x < 0 for x in h):
        raise NegativeCoefficient(f"negative h*-coefficient in {h}")
    return HStarVector(tuple(h))


def h_star(P: LatticePolytope, check: bool = True) -> HStarVector:
    """The h*-vector of ``P`` from ``d+1`` dilation counts.

    With ``check`` the four basic identities (constant term, linear term,
    interior count, volume) are asserted against independent counts.
    """
    c = P._cache
    if "hstar" in c:
        return c["hstar"]
    d = P.dim
    h = h_star_from_counts(d, dilation_counts(P, d))
    if check:
        assert h[0] == 1, h
        assert h[1] == len(P.lattice_points) - d - 1, h
        assert h[d] == len(P.interior_points), h
        assert sum(h) == P.volume, h
    c["hstar"] = h
    return h


def reciprocity_holds(P: LatticePolytope, ts: Sequence[int] = (1, 2)) -> bool:
    """``(-1)^d ehr(-t)`` equals the interior count of ``tP`` for each ``t``."""
    ehr = ehrhart_polynomial(P)
    d = P.dim
    inner = dilation_counts(P, max(ts), interior=True)
    return all((-1) ** d * ehr(-t) == inner[t] for t in ts)


# ---------------------------------------------------------------------------
# special simplices
# ---------------------------------------------------------------------------

def sylvester(n: int) -> list[int]:
    """First ``n`` terms 2, 3, 7, 43, ... of the Sylvester sequence."""
    out = []
    prod = 1
    for _ in range(n):
        out.append(prod + 1)
        prod *= out[-1]
    return out


def zpw_simplex(d: int, k: int) -> LatticePolytope:
    """``conv(0, s_1 e_1, ..., s_(d-1) e_(d-1), (k+1)(s_d - 1) e_d)``."""
    if d < 2 or k < 1:
        raise ValueError("need d >= 2 and k >= 1")
    s = sylvester(d)
    pts = [(0,) * d]
    for i in range(d - 1):
        pts.append(tuple(s[i] if j == i else 0 for j in range(d)))
    pts.append(tuple((k + 1) * (s[d - 1] - 1) if j == d - 1 else 0 for j in range(d)))
    return LatticePolytope(pts)


def almost_zpw_simplex() -> LatticePolytope:
    return LatticePolytope([(0, 0, 0), (2, 0, 0), (0, 6, 0), (0, 0, 6)])


def duong_simplex(k: int) -> LatticePolytope:
    if k < 1:
        raise ValueError("k >= 1")
    return LatticePolytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (3, 6 * k + 1, 12 * k + 8)])


def is_clean(P: LatticePolytope) -> bool:
    """Only the vertices are boundary lattice points."""
    return len(P.lattice_points) - len(P.interior_points) == len(P.vertices)


# ---------------------------------------------------------------------------
# inequality checkers
# ---------------------------------------------------------------------------

def check_scott(h: Sequence[int]) -> bool:
    _, h1, h2 = h
    return h2 == 0 or 0 < h2 <= h1 <= 3 * h2 + 3 or tuple(h) == (1, 7, 1)


def check_hollow_3d(h: Sequence[int]) -> bool:
    _, h1, h2, h3 = h
    if h3 != 0:
        raise ValueError("only for hollow polytopes (h*_3 = 0)")
    return h2 == 0 or 0 <= h1 <= 3 * h2 + 3 or tuple(h) == (1, 7, 1, 0)


CONJ_MAIN_LABELS = ("1", "2", "3", "4", "5", "4*")


def check_conj_main(h: Sequence[int], is_exception: bool = False) -> dict[str, bool]:
    """Truth value of each conjectured inequality for a 3-dimensional h*-vector with ``h*_3 >= 1``.

    ``is_exception`` does not change any value; it is echoed under the key
    ``"exception"`` so a report can tell expected failures of (4*) apart.
    """
    _, h1, h2, h3 = h
    return {
        "1": h3 <= h1,
        "2": h1 <= h2,
        "3": h2 <= 19 * h3 + 16,
        "4": h2 - h1 <= 9 * h3 + 9,
        "5": 5 * h3 * h1 + 4 * h1 + 4 <= 4 * h3 * h3 + 4 * h3 * h2 + 5 * h2,
        "4*": h2 - h1 <= 9 * h3 + 7,
        "exception": is_exception,
    }


def conj_main_equalities(h: Sequence[int]) -> dict[str, bool]:
    _, h1, h2, h3 = h
    return {
        "1": h3 == h1,
        "3": h2 == 19 * h3 + 16,
        "5": 5 * h3 * h1 + 4 * h1 + 4 == 4 * h3 * h3 + 4 * h3 * h2 + 5 * h2,
        "4*": h2 - h1 == 9 * h3 + 7,
    }


_BASE = [(0, 0, 0), (1, 0, 0), (0, 1, 0)]

_SPORADIC = [
    ("i", [(2, 19, 25)], (1, 3, 20, 1)),
    ("ii", [(3, 19, 28)], (1, 4, 22, 1)),
    ("iii", [(3, 13, 19), (1, -2, -3)], (1, 5, 22, 1)),
    ("iv", [(4, 7, 11), (-5, -7, -15)], (1, 7, 24, 1)),
    ("v", [(2, 2, 3), (-21, -8, -25)], (1, 11, 28, 1)),
    ("vi", [(5, 17, 42)], (1, 11, 29, 1)),
    ("vii", [(5, 7, 17), (1, -2, -5)], (1, 12, 29, 1)),
    ("viii", [(7, 2, 9), (-7, -3, -15)], (1, 13, 30, 1)),
    ("ix", [(0, 0, 1), (5, 42, -25)], (1, 14, 31, 1)),
    ("x", [(5, 23, 45)], (1, 8, 34, 2)),
]


@dataclass(frozen=True)
class ListedPolytope:
    label: str
    polytope: LatticePolytope
    h_star: tuple[int, ...]


def conj_main_exceptions(k_max: int) -> list[ListedPolytope]:
    """The sporadic exceptions to (4*) plus the two one-parameter families for ``k = 1..k_max``."""
    out = [ListedPolytope(lab, LatticePolytope(_BASE + extra), h) for lab, extra, h in _SPORADIC]
    for k in range(1, k_max + 1):
        h = (1, 4 * k + 3, 13 * k + 11, k)
        out.append(ListedPolytope(f"xi[k={k}]", LatticePolytope(
            _BASE + [(3 * k + 3, 9 * k + 8, 18 * k + 15)]), h))
        out.append(ListedPolytope(f"xii[k={k}]", LatticePolytope(
            _BASE + [(3, 12 * k + 8, 18 * k + 15)]), h))
    return out


def pentagon_vertices(h3: int) -> tuple[tuple[int, ...], ...]:
    """Vertices v1..v5 of the region cut out by (1), (2), (3), (4*), (5) at fixed ``h*_3 > 1``."""
    if h3 < 2:
        raise ValueError("defined for h*_3 >= 2")
    return (
        (1, h3, h3, h3),
        (1, 4 * h3 + 4, 4 * h3 + 4, h3),
        (1, 16 * h3 + 19, 19 * h3 + 16, h3),
        (1, 10 * h3 + 9, 19 * h3 + 16, h3),
        (1, h3, 10 * h3 + 7, h3),
    )


def pentagon_witnesses(h3: int) -> dict[str, LatticePolytope]:
    """Polytopes realizing v1, v2, v3 and v5 (v4 has no known realization)."""
    return {
        "v1": LatticePolytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (3, 3 * h3, 3 * h3 + 1)]),
        "v2": LatticePolytope([(0, 0, 0), (1, 0, 0), (2, 3, 0), (2, 3, 3 + 3 * h3)]),
        "v3": zpw_simplex(3, h3),
        "v5": duong_simplex(h3),
    }


def v4_neighbors(h3: int) -> list[ListedPolytope]:
    """Three polytopes with h*-vectors next to the unrealized pentagon vertex v4."""
    h = h3
    return [
        ListedPolytope("near-v4-a", LatticePolytope(
            [(1, 0, 0), (2, 0, 0), (0, 1, 0), (0, 3, 0), (0, 0, 6 * h + 5), (1, 0, 3 * h + 3)]),
            (1, 10 * h + 11, 19 * h + 16, h)),
        ListedPolytope("near-v4-b", LatticePolytope(
            [(0, 0, 0), (1, 0, 0), (0, 1, 0), (9 * h + 8, 6 * h + 5, 18 * h + 15),
             (12 * h + 10, 8 * h + 7, 24 * h + 20)]),
            (1, 10 * h + 9, 19 * h + 15, h)),
        ListedPolytope("near-v4-c", LatticePolytope(
            [(0, 0, 0), (1, 0, 0), (0, 1, 0), (6 * h + 5, 3 * h + 3, 18 * h + 15),
             (8 * h + 5, 4 * h + 3, 24 * h + 14)]),
            (1, 10 * h + 7, 19 * h + 14, h)),
    ]


def check_stanley_hibi(h: Sequence[int], s: int | None = None) -> dict[str, bool]:
    """The four classical families of linear h*-inequalities, one verdict per family."""
    h = list(h)
    d = len(h) - 1
    if s is None:
        s = max(i for i, x in enumerate(h) if x)
    fam1 = h[d] <= h[1] if d >= 1 else True
    # only up to (d-1)//2: beyond that the chain fails on realizable vectors such as (1,35,35,1)
    fam2 = all(sum(h[d - j] for j in range(1, i + 1)) <= sum(h[j] for j in range(2, i + 2))
               for i in range(1, (d - 1) // 2 + 1))
    fam3 = all(sum(h[:i + 1]) <= sum(h[s - j] for j in range(i + 1)) for i in range(s + 1))
    fam4 = h[d] == 0 or all(h[1] <= h[i] for i in range(1, d))
    return {"1": fam1, "2": fam2, "3": fam3, "4": fam4}


def log_concave(seq: Sequence[int]) -> bool:
    return all(seq[i - 1] * seq[i + 1] <= seq[i] ** 2 for i in range(1, len(seq) - 1))


def unimodal(seq: Sequence[int]) -> bool:
    i = 0
    n = len(seq)
    while i + 1 < n and seq[i] <= seq[i + 1]:
        i += 1
    while i + 1 < n and seq[i] >= seq[i + 1]:
        i += 1
    return i == n - 1
