import os
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache

import pytest

from latpoly.exact import LatticePolytope
from latpoly.growth import enumerate_polytopes
from latpoly.properties import analyze

SLOW = os.environ.get("LATPOLY_SLOW") == "1"
JOBS = max(1, min(4, os.cpu_count() or 1))

# acceptance results, filled by tests/test_acceptance.py and printed at the end
ACCEPTANCE: dict[str, tuple[str, str]] = {}


@lru_cache(maxsize=None)
def database(d: int, K: int) -> dict:
    return enumerate_polytopes(d, K, jobs=JOBS)


def _analyze(job):
    key, rep, props, budget = job
    return key, analyze(LatticePolytope(rep), props, budget)


@lru_cache(maxsize=None)
def properties(d: int, K: int, props: tuple[str, ...], max_volume: int | None = None) -> dict:
    """Canonical key -> PropertyRecord over the (d, K) database, optionally below a volume."""
    db = database(d, K)
    jobs = [(k, rep, props, 200_000) for k, rep in db.items()
            if max_volume is None or int(k.split(";")[1]) <= max_volume]
    with ProcessPoolExecutor(JOBS) as ex:
        return dict(ex.map(_analyze, jobs, chunksize=8))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: opt-in long computation (LATPOLY_SLOW=1)")


def pytest_collection_modifyitems(config, items):
    if SLOW:
        return
    skip = pytest.mark.skip(reason="opt-in: set LATPOLY_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: (int(s.split()[0]), s)):
        status, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"criterion {name}: {status}  {detail}")
