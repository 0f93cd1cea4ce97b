import itertools
import math

import pytest

from latpoly.equivalence import canonical_key
from latpoly.exact import LatticePolytope, simplex_volume
from latpoly.simplices import SimplexCatalog, enumerate_simplices, enumerate_simplices_upto


def box_simplices(d, K, B):
    """Oracle: all d-simplices with vertices in [0, B]^d, deduplicated by key."""
    grid = list(itertools.product(range(B + 1), repeat=d))
    origin = (0,) * d
    keys = set()
    for rest in itertools.combinations(grid[1:], d):
        S = (origin,) + rest
        v = simplex_volume(S)
        if 1 <= v <= K:
            keys.add(canonical_key(LatticePolytope(S)))
    return keys


def hnf_simplices(d, K):
    """Oracle: simplices conv(0, columns of an upper-triangular Hermite matrix)."""
    keys = set()
    for diag in itertools.product(range(1, K + 1), repeat=d):
        if math.prod(diag) > K:
            continue
        ranges = []
        for i in range(d):
            for j in range(i + 1, d):
                ranges.append(((i, j), range(diag[j])))
        for offs in itertools.product(*(r for _, r in ranges)):
            H = [[0] * d for _ in range(d)]
            for i in range(d):
                H[i][i] = diag[i]
            for ((i, j), _), x in zip(ranges, offs):
                H[i][j] = x
            cols = [tuple(H[r][c] for r in range(d)) for c in range(d)]
            keys.add(canonical_key(LatticePolytope([(0,) * d] + cols)))
    return keys


@pytest.mark.parametrize("V", [1, 2, 5, 12])
def test_segments(V):
    assert len(enumerate_simplices(1, V)) == 1


def test_unimodular_triangle():
    assert len(enumerate_simplices(2, 1)) == 1
    assert len(enumerate_simplices_upto(3, 1)) == 1


def test_d2_upto_3_against_box():
    # a triangle of area <= 3/2 fits in [0,3]^2 after a lattice map
    assert set(enumerate_simplices_upto(2, 3)) == box_simplices(2, 3, 3)


def test_d3_upto_2_against_hermite_scan():
    assert set(enumerate_simplices_upto(3, 2)) == hnf_simplices(3, 2)


@pytest.mark.parametrize("d,K", [(2, 6), (3, 8), (4, 6), (5, 3)])
def test_against_hermite_scan(d, K):
    assert set(enumerate_simplices_upto(d, K)) == hnf_simplices(d, K)


def test_volumes_and_representatives():
    cat = SimplexCatalog()
    for V in range(1, 7):
        for key, rep in cat.get(3, V).items():
            P = LatticePolytope(rep)
            assert P.volume == V and len(P.vertices) == 4
            assert canonical_key(P) == key


def test_frozen_counts():
    # produced by the Hermite-scan oracle, frozen
    counts = [len(enumerate_simplices(3, V)) for V in range(1, 9)]
    assert counts == [1, 2, 3, 7, 5, 10, 7, 20]
    assert [len(enumerate_simplices(4, V)) for V in range(1, 7)] == [1, 2, 4, 10, 8, 19]
