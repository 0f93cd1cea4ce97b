import csv
import io
import os
from contextlib import redirect_stdout

import pytest

from conftest import database, properties
from latpoly.cli import main
from latpoly.growth import enumerate_polytopes
from latpoly.properties import PROPERTY_NAMES
from latpoly.store import (DatabaseRecord, FormatError, diff, load_fixture, read_analysis_csv, read_db, read_header,
                           records_from_classes, run_enumeration, stats, verify, write_db)


def run_cli(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main([str(a) for a in argv])
    return code, buf.getvalue()


# -- file format -------------------------------------------------------------------

def test_empty_round_trip(tmp_path):
    p = str(tmp_path / "empty.db")
    write_db([], p, dim=3, max_volume=0)
    assert read_db(p) == []
    assert read_header(p)["records"] == "0"


def test_round_trip_d3_k2(tmp_path):
    recs = records_from_classes(database(3, 2))
    assert len(recs) == 4
    p = str(tmp_path / "d3.db")
    write_db(recs, p, 3, 2)
    back = read_db(p, check=True)
    assert back == recs
    assert [r.canonical_key() for r in back] == [r.canonical_key() for r in recs]


def test_unsorted_input_rejected(tmp_path):
    recs = records_from_classes(database(3, 3))
    with pytest.raises(ValueError):
        write_db(list(reversed(recs)), str(tmp_path / "x.db"))


@pytest.mark.parametrize("bad", ["3;1;0,0,0|1,0,0|0,1,0", "3;x;0,0,0|1,0,0|0,1,0|0,0,1", "3;1",
                                 "3;1;0,0|1,0|0,1|1,1"])
def test_corrupted_line_reports_line_number(tmp_path, bad):
    recs = records_from_classes(database(3, 3))
    p = tmp_path / "bad.db"
    write_db(recs, str(p), 3, 3)
    lines = p.read_text().splitlines()
    lines[5] = bad
    p.write_text("\n".join(lines) + "\n")
    with pytest.raises(FormatError) as exc:
        read_db(str(p))
    assert exc.value.line == 6


def test_wrong_volume_detected_on_check(tmp_path):
    p = tmp_path / "vol.db"
    p.write_text("3;2;0,0,0|1,0,0|0,1,0|0,0,1\n")
    assert len(read_db(str(p))) == 1
    with pytest.raises(FormatError) as exc:
        read_db(str(p), check=True)
    assert exc.value.line == 1


# -- runs ----------------------------------------------------------------------------

def test_parallel_runs_are_byte_identical(tmp_path):
    a, b = str(tmp_path / "a.db"), str(tmp_path / "b.db")
    run_enumeration(3, 5, a, jobs=1)
    run_enumeration(3, 5, b, jobs=2)
    with open(a, "rb") as fa, open(b, "rb") as fb:
        assert fa.read() == fb.read()


@pytest.mark.parametrize("stop", [1, 3, 7])
def test_resume_matches_uninterrupted(tmp_path, stop):
    ref, out = str(tmp_path / "ref.db"), str(tmp_path / "run.db")
    run_enumeration(3, 5, ref)
    assert run_enumeration(3, 5, out, stop_after=stop) is None
    assert not os.path.exists(out)
    # a torn trailing line in the checkpoint must not break resuming
    with open(out + ".ckpt", "a") as f:
        f.write('{"seed": "3;5;')
    run_enumeration(3, 5, out, resume=True)
    with open(ref, "rb") as fa, open(out, "rb") as fb:
        assert fa.read() == fb.read()


# -- statistics and references -----------------------------------------------------

def test_d3_k5_rows():
    recs = records_from_classes(database(3, 5))
    table = stats(recs, properties(3, 8, PROPERTY_NAMES))
    rows = [tuple(table.rows[v][c] for c in ("TOT", "SP", "VA", "IDP", "UC", "UT")) for v in range(1, 6)]
    assert rows == [(1, 1, 1, 1, 1, 1), (3, 2, 2, 2, 2, 2), (6, 5, 5, 5, 5, 5),
                    (17, 15, 14, 14, 14, 14), (19, 17, 15, 15, 15, 15)]
    assert table.hierarchy_ok()


def test_smooth_column_d3():
    recs = records_from_classes(database(3, 6))
    table = stats(recs, properties(3, 8, PROPERTY_NAMES, 6), columns=("TOT", "SMOOTH"))
    assert table.column("SMOOTH") == [1, 0, 1, 1, 2, 4]
    assert verify(table, load_fixture("smooth_d3"), 6) == []


def test_fixture_check_d4():
    table = stats(records_from_classes(database(4, 6)), columns=("TOT",))
    assert verify(table, load_fixture("counts_d4"), 6) == []


def test_fixture_check_d5_tot():
    table = stats(records_from_classes(database(5, 4)), columns=("TOT",))
    assert table.column("TOT") == [1, 4, 10, 38]
    assert verify(table, load_fixture("counts_d5"), 4) == []


def test_fault_injection_without_dedup():
    # concatenate per-seed results without merging across seeds
    raw = []
    enumerate_polytopes(4, 6, on_seed=lambda seed, classes: raw.extend(classes.items()))
    recs = sorted((DatabaseRecord.from_key(k, rep) for k, rep in raw), key=DatabaseRecord.sort_key)
    table = stats(recs, columns=("TOT",))
    bad = verify(table, load_fixture("counts_d4"), 6)
    assert bad and all(m.got > m.expected for m in bad)
    good = records_from_classes(database(4, 6))
    assert not diff(good, recs)  # same classes, only multiplicities differ
    assert diff(good, good[:-3]).only_left == tuple(sorted(r.canonical_key() for r in good[-3:]))


def test_verify_blank_cells_and_missing_volumes():
    fx = load_fixture("counts_d3")
    assert fx.rows[20]["UC"] is None  # beyond the reference's property range
    table = stats(records_from_classes(database(3, 3)), columns=("TOT",))
    assert verify(table, fx, 3) == []
    bad = verify(table, fx, 4)
    assert [(m.volume, m.got, m.expected) for m in bad] == [(4, 0, 17)]


# -- command line -------------------------------------------------------------------

def test_cli_pipeline(tmp_path):
    db = tmp_path / "d3.db"
    code, _ = run_cli("enumerate", "--dim", 3, "--max-volume", 4, "--out", db)
    assert code == 0 and len(read_db(str(db))) == 27
    an = tmp_path / "an.csv"
    assert run_cli("analyze", "--in", db, "--out", an)[0] == 0
    props = read_analysis_csv(str(an))
    assert len(props) == 27
    code, _ = run_cli("verify", "--in", db, "--analysis", an, "--fixture", "counts_d3",
                      "--columns", "TOT,SP,VA,IDP,UC,UT")
    assert code == 0
    code, out = run_cli("stats", "--in", db, "--analysis", an)
    assert code == 0 and out.splitlines()[0].startswith("volume")
    hs = tmp_path / "h.csv"
    assert run_cli("hstar", "--in", db, "--out", hs)[0] == 0
    with open(hs, newline="") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 27 and all(sum(int(r[f"h{i}"]) for i in range(4)) == int(r["volume"]) for r in rows)


def test_cli_exit_codes(tmp_path):
    small, big = tmp_path / "s.db", tmp_path / "b.db"
    run_cli("enumerate", "--dim", 2, "--max-volume", 3, "--out", small)
    run_cli("enumerate", "--dim", 2, "--max-volume", 4, "--out", big)
    assert run_cli("diff", small, small)[0] == 0
    assert run_cli("diff", small, big)[0] == 1
    assert run_cli("verify", "--in", small, "--fixture", "counts_d3")[0] == 1
    assert main(["enumerate", "--dim", "three"]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["analyze", "--in", str(tmp_path / "missing.db")]) == 2


def test_cli_simplices_and_conjectures(tmp_path):
    out = tmp_path / "s.db"
    assert run_cli("simplices", "--dim", 3, "--max-volume", 8, "--out", out)[0] == 0
    assert [sum(1 for r in read_db(str(out)) if r.volume == v) for v in range(1, 9)] == [1, 2, 3, 7, 5, 10, 7, 20]
    db = tmp_path / "d3.db"
    run_cli("enumerate", "--dim", 3, "--max-volume", 6, "--out", db)
    rep = tmp_path / "report.txt"
    assert run_cli("conjectures", "--in", db, "--out", rep, "--exception-k-max", 3)[0] == 0
    assert rep.read_text().strip()


# -- larger reference slices --------------------------------------------------------

@pytest.mark.parametrize("d,K", [(3, 12), (5, 10)])
def test_reference_totals(d, K):
    table = stats(records_from_classes(database(d, K)), columns=("TOT",))
    assert verify(table, load_fixture(f"counts_d{d}"), K) == []


@pytest.mark.slow
def test_d3_k12_all_columns():
    table = stats(records_from_classes(database(3, 12)), properties(3, 12, tuple(PROPERTY_NAMES)),
                  columns=("TOT", "SP", "VA", "IDP", "UC", "UT", "SMOOTH"))
    assert verify(table, load_fixture("counts_d3"), 12) == []
    assert verify(table, load_fixture("smooth_d3"), 12) == []
