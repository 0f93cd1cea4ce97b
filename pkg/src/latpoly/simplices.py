"""Enumeration of lattice simplices of a given normalized volume.

Every d-simplex of volume V has a Hermite normal form representative whose
last vertex sits at height V/v over a (d-1)-simplex of volume v in the
hyperplane x_d = 0, with the remaining apex coordinates reduced modulo that
height.  The enumeration recurses on the dimension and deduplicates with
canonical keys.
"""

from __future__ import annotations

import itertools

from .equivalence import canonical_form
from .exact import LatticePolytope, Point


def divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


class SimplexCatalog:
    """Memoized ``S^d_V`` tables: ``catalog.get(d, V)`` maps key -> representative vertices."""

    def __init__(self):
        self._tables: dict[tuple[int, int], dict[str, tuple[Point, ...]]] = {}

    def get(self, d: int, V: int) -> dict[str, tuple[Point, ...]]:
        if (d, V) not in self._tables:
            self._tables[(d, V)] = self._build(d, V)
        return self._tables[(d, V)]

    def _build(self, d: int, V: int) -> dict[str, tuple[Point, ...]]:
        if d < 1 or V < 1:
            raise ValueError("need d >= 1 and V >= 1")
        if d == 1:
            P = LatticePolytope([(0,), (V,)])
            key, rep = canonical_form(P)
            return {key: rep}
        out: dict[str, tuple[Point, ...]] = {}
        for v in divisors(V):
            height = V // v
            for facet in self.get(d - 1, v).values():
                base = [tuple(x) + (0,) for x in facet]
                for head in _apex_heads(d, height, v == 1):
                    S = LatticePolytope(base + [tuple(head) + (height,)])
                    key, rep = canonical_form(S)
                    if key not in out:
                        out[key] = rep
        return out


def _apex_heads(d: int, height: int, unimodular_base: bool):
    """Apex positions over a facet; over a unimodular facet one per symmetry orbit.

    Over the standard (d-1)-simplex the apex ``(p, h)`` gives the cyclic group
    generated by ``(sum(p) - 1, -p_1, ..., -p_(d-1), 1) / h`` in barycentric
    coordinates.  Permuting the base vertices permutes the first ``d``
    entries, so apexes with the same sorted entries give equivalent simplices.
    """
    seen = set()
    for head in itertools.product(range(height), repeat=d - 1):
        if unimodular_base:
            sig = tuple(sorted([(sum(head) - 1) % height] + [(-x) % height for x in head]))
            if sig in seen:
                continue
            seen.add(sig)
        yield head


_default = SimplexCatalog()


def enumerate_simplices(d: int, V: int, catalog: SimplexCatalog | None = None
                        ) -> dict[str, tuple[Point, ...]]:
    """All d-simplices of normalized volume exactly ``V`` up to equivalence.

    Returns a dict from canonical key to canonical representative vertices.
    """
    return (catalog or _default).get(d, V)


def enumerate_simplices_upto(d: int, K: int, catalog: SimplexCatalog | None = None
                             ) -> dict[str, tuple[Point, ...]]:
    out: dict[str, tuple[Point, ...]] = {}
    for V in range(1, K + 1):
        out.update(enumerate_simplices(d, V, catalog))
    return out
