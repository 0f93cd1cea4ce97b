"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line that is printed in the pytest terminal
summary.  Running this file directly prints the same lines:

    python tests/test_acceptance.py
"""

import random
import sys
import time

import pytest

from conftest import ACCEPTANCE, database, properties
from latpoly.ehrhart import (almost_zpw_simplex, check_conj_main, conj_main_exceptions, duong_simplex, h_star,
                             is_clean, pentagon_vertices, pentagon_witnesses, reciprocity_holds, v4_neighbors,
                             zpw_simplex)
from latpoly.equivalence import apply_map, canonical_key, random_unimodular_map
from latpoly.exact import LatticePolytope
from latpoly.properties import PROPERTY_NAMES, analyze, is_idp, is_smooth, separating_examples
from latpoly.simplices import SimplexCatalog
from latpoly.store import load_fixture, records_from_classes, stats, verify

COLS = ("TOT", "SP", "VA", "IDP", "UC", "UT")
ALL_BUT_SMOOTH = tuple(p for p in PROPERTY_NAMES if p != "smooth")


def _rows(d, K, columns=COLS):
    props = properties(d, K, ALL_BUT_SMOOTH) if columns != ("TOT",) else None
    return stats(records_from_classes(database(d, K)), props, columns)


def _fmt(table, columns=COLS):
    return " ".join("(" + ",".join(str(table.rows[v][c]) for c in columns) + ")" for v in sorted(table.rows))


# -- the criteria ---------------------------------------------------------------------

def check_1():
    t0 = time.time()
    table = _rows(3, 8)
    bad = verify(table, load_fixture("counts_d3"), 8)
    return not bad, f"d=3 K=8 rows {_fmt(table)} in {time.time() - t0:.0f}s; mismatches {bad}"


def check_2():
    table = _rows(4, 6)
    bad = verify(table, load_fixture("counts_d4"), 6)
    return not bad, f"d=4 K=6 rows {_fmt(table)}; mismatches {bad}"


def check_3():
    t5 = _rows(5, 4, ("TOT",))
    t6 = _rows(6, 5)
    tot5, tot6 = t5.column("TOT"), t6.column("TOT")
    idp = t6.rows[5]["IDP"]
    ok = tot5 == [1, 4, 10, 38] and tot6 == [1, 4, 11, 48, 51] and idp == 27
    ok = ok and not verify(t6, load_fixture("counts_d6"), 5)
    return ok, f"d=5 TOT {tot5}; d=6 TOT {tot6}, IDP at volume 5 = {idp}"


def check_4():
    db = database(3, 12)
    counts = [0] * 12
    not_idp = []
    for key, rep in db.items():
        P = LatticePolytope(rep)
        if is_smooth(P):
            counts[P.volume - 1] += 1
            if not is_idp(P):
                not_idp.append(key)
    ok = counts == [1, 0, 1, 1, 2, 4, 5, 6, 8, 8, 10, 16] and not not_idp
    return ok, f"smooth counts {counts}; smooth but not IDP: {len(not_idp)}"


SMOOTH_LIST = {
    "2.a": [(0, 0), (2, 0), (0, 2)],
    "2.b": [(0, 0), (3, 0), (0, 3)],
    "2.c": [(0, 0), (2, 0), (0, 2), (2, 2)],
    "2.d": [(0, 0), (1, 0), (0, 1), (-2, 1), (-4, 1)],
    "2.e": [(0, 0), (1, 0), (0, 1), (3, 2), (2, 3), (3, 3)],
    "2.f": [(0, 0), (1, 0), (0, 1), (2, 1), (1, 2), (2, 2)],
    "2.g": [(0, 0), (1, 0), (0, 1), (3, 1), (1, 2), (4, 2)],
    "2.h": [(0, 0), (1, 0), (1, 2), (-2, 2)],
    "3.a": [(0, 0, 0), (3, 0, 0), (0, 3, 0), (0, 0, 3)],
    "3.b": [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1), (1, 0, 1), (0, -2, 1), (1, -2, 1)],
    "3.c": [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (0, -2, 1), (2, -2, 1)],
    "3.d": [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)],
    "4.a": [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1),
            (1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 1, 0), (0, 1, 0, 1)],
    "5.a": [(0, 0, 0, 0, 0), (1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 1, 0), (0, 0, 0, 0, 1),
            (1, 0, 0, 1, 0), (1, 0, 0, 0, 1), (0, 1, 0, 1, 0), (0, 1, 0, 0, 1), (0, 0, 1, 1, 0), (0, 0, 1, 0, 1)],
}
SMOOTH_DB = {2: (2, 10), 3: (3, 12), 4: (4, 6), 5: (5, 10)}


def check_5():
    found, missing = [], []
    for label, verts in SMOOTH_LIST.items():
        P = LatticePolytope(verts)
        key = canonical_key(P)
        if P.volume <= SMOOTH_DB[P.dim][1]:
            pool = database(*SMOOTH_DB[P.dim])
        else:
            # printed with volume beyond the database bound: use the complete simplex table
            pool = SimplexCatalog().get(P.dim, P.volume)
        hit = key in pool and is_smooth(LatticePolytope(pool[key]))
        (found if hit else missing).append(f"{label}:V{P.volume}")
    # readings recorded in the decisions ledger
    extra = {"2*Delta_3": [(0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 2)],
             "pentagon": [(0, 0), (1, 0), (0, 1), (-2, 1), (-4, 3)]}
    for label, verts in extra.items():
        P = LatticePolytope(verts)
        pool = database(*SMOOTH_DB[P.dim])
        if not (canonical_key(P) in pool and is_smooth(P)):
            missing.append(label)
    return not missing, f"found {len(found)} of {len(SMOOTH_LIST)} listed ({' '.join(found)}); missing {missing}"


def check_6():
    cat = SimplexCatalog()
    one = {}
    for V in range(1, 86):
        for key, rep in cat.get(3, V).items():
            P = LatticePolytope(rep)
            if len(P.interior_points) == 1:
                one[key] = (V, is_clean(P))
    top = max(v for v, _ in one.values())
    at_top = {k for k, (v, _) in one.items() if v == top}
    clean = {k: v for k, (v, c) in one.items() if c}
    clean_top = max(clean.values())
    ok = (len(one) == 225 and top == 72
          and at_top == {canonical_key(zpw_simplex(3, 1)), canonical_key(almost_zpw_simplex())}
          and clean_top == 20 and {k for k, v in clean.items() if v == 20} == {canonical_key(duong_simplex(1))})
    return ok, f"{len(one)} simplices with one interior point, max volume {top} ({len(at_top)} classes); " \
               f"{len(clean)} clean, max volume {clean_top}"


def check_7():
    bad = []
    for k in range(1, 6):
        if h_star(zpw_simplex(3, k)) != (1, 16 * k + 19, 19 * k + 16, k):
            bad.append(f"zpw k={k}")
        if h_star(duong_simplex(k)) != (1, k, 10 * k + 7, k):
            bad.append(f"duong k={k}")
        for it in v4_neighbors(k):
            if h_star(it.polytope) != it.h_star:
                bad.append(f"{it.label} h3={k}")
    for h3 in range(2, 6):
        verts = pentagon_vertices(h3)
        for name, P in pentagon_witnesses(h3).items():
            if h_star(P) != verts[int(name[1]) - 1]:
                bad.append(f"{name} h3={h3}")
    return not bad, f"closed forms checked; failures {bad}"


def check_8():
    exceptions = {canonical_key(it.polytope) for it in conj_main_exceptions(20)}
    n = star_fail = 0
    bad = []
    for key, rep in database(3, 8).items():
        h = h_star(LatticePolytope(rep))
        if h[3] < 1:
            continue
        n += 1
        r = check_conj_main(h, key in exceptions)
        if not all(r[x] for x in ("1", "2", "3", "4", "5")):
            bad.append((key, tuple(h)))
        if not r["4*"]:
            star_fail += 1
            if key not in exceptions:
                bad.append((key, tuple(h), "4*"))
    return not bad, f"{n} polytopes with h*_3 >= 1; (4*) fails on {star_fail} listed exceptions; violations {bad}"


def check_9():
    ex = separating_examples()
    recs = {name: analyze(P) for name, P in ex.items()}
    classified = (recs["spanning-not-va"].spanning and recs["spanning-not-va"].very_ample is False
                  and recs["va-not-idp"].very_ample and recs["va-not-idp"].idp is False
                  and recs["uc-not-ut"].unimodular_cover and recs["uc-not-ut"].unimodular_triangulation is False)
    tests = {
        "spanning-not-va": (("spanning", "va"), lambda r: r.spanning and r.very_ample is False),
        "va-not-idp": (("va", "idp"), lambda r: r.very_ample and r.idp is False),
        "uc-not-ut": (("uc", "ut"), lambda r: r.unimodular_cover and r.unimodular_triangulation is False),
    }
    notes = []
    minimal = True
    for name, (props, separates) in tests.items():
        V = ex[name].volume
        smaller = properties(3, 12, props, V - 1)
        hits = sorted((int(k.split(";")[1]), k) for k, r in smaller.items() if separates(r))
        unknown = [k for k, r in smaller.items() if any(r.get(p) is None for p in props)]
        if hits or unknown:
            minimal = False
        notes.append(f"{name} (volume {V}): smaller separating {len(hits)}"
                     + (f", smallest volume {hits[0][0]}" if hits else "")
                     + (f", undecided {len(unknown)}" if unknown else ""))
    return classified and minimal, f"classification {'ok' if classified else 'WRONG'}; " + "; ".join(notes)


def check_10():
    from test_growth import box_polygons
    problems = []
    oracle = {canonical_key(LatticePolytope(S)) for S in box_polygons(6, 6)}
    if set(database(2, 6)) != oracle:
        problems.append("d=2 oracle")
    for d, K in [(2, 6), (3, 6), (4, 6)]:
        for key, rep in database(d, K).items():
            P = LatticePolytope(rep)
            h = h_star(P, check=False)
            n = len(P.lattice_points)
            if (h[0], h[1], h[d], sum(h)) != (1, n - d - 1, len(P.interior_points), P.volume):
                problems.append(f"identities {key}")
            if n > d + P.volume:
                problems.append(f"blichfeldt {key}")
            if not reciprocity_holds(P, (1, 2)):
                problems.append(f"reciprocity {key}")
    for d, K in [(2, 6), (3, 6)]:
        for key, rec in properties(d, K, ALL_BUT_SMOOTH).items():
            if rec.hierarchy_violations():
                problems.append(f"hierarchy {key}")
    rng = random.Random(2024)
    maps = 0
    for d, K in [(2, 6), (3, 5)]:
        for key, rep in database(d, K).items():
            P = LatticePolytope(rep)
            for _ in range(100):
                maps += 1
                if canonical_key(apply_map(P, random_unimodular_map(d, rng))) != key:
                    problems.append(f"key {key}")
                    break
    return not problems, f"box oracle {len(oracle)} polygons; {maps} random maps; violations {problems[:5]}"


CRITERIA = {
    "1 d3 K8 all columns": check_1,
    "2 d4 K6 columns": check_2,
    "3 d5 K4 and d6 K5": check_3,
    "4 smooth d3 up to 12": check_4,
    "5 smooth volume <= 10 list": check_5,
    "6 simplices with one interior point": check_6,
    "7 h* closed forms": check_7,
    "8 conjectured inequalities on d3 K8": check_8,
    "9 minimal separating examples": check_9,
    "10 oracle and invariant suites": check_10,
}


@pytest.mark.parametrize("name", list(CRITERIA))
def test_criterion(name):
    ok, detail = CRITERIA[name]()
    ACCEPTANCE[name] = ("PASS" if ok else "FAIL", detail)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for name, fn in CRITERIA.items():
        ok, detail = fn()
        failed += not ok
        print(f"criterion {name}: {'PASS' if ok else 'FAIL'}  {detail}", flush=True)
    sys.exit(1 if failed else 0)
