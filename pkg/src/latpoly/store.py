"""Flat-file polytope databases, resumable runs, statistics and reference checks.

Database format, one record per line after a ``#`` header::

    d;V;x11,x12,...|x21,x22,...|...

The vertices are the canonical representative, so every line is
reproducible from its key and files from different runs compare byte for
byte.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Sequence

from .equivalence import canonical_form
from .exact import LatticePolytope, Point
from .properties import PROPERTY_NAMES, PropertyRecord

ALGORITHM_VERSION = "1"


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class DatabaseRecord:
    dim: int
    volume: int
    vertices: tuple[Point, ...]
    key: str | None = field(default=None, compare=False)

    @classmethod
    def from_key(cls, key: str, rep: Sequence[Point]) -> "DatabaseRecord":
        d, v, _ = key.split(";", 2)
        return cls(int(d), int(v), tuple(tuple(p) for p in rep), key)

    def polytope(self) -> LatticePolytope:
        return LatticePolytope(self.vertices)

    def canonical_key(self) -> str:
        if self.key is None:
            object.__setattr__(self, "key", canonical_form(self.polytope())[0])
        return self.key

    def sort_key(self) -> tuple[int, str]:
        return self.volume, self.canonical_key()

    def to_line(self) -> str:
        verts = "|".join(",".join(str(x) for x in v) for v in self.vertices)
        return f"{self.dim};{self.volume};{verts}"


def records_from_classes(classes: dict[str, Sequence[Point]]) -> list[DatabaseRecord]:
    return sorted((DatabaseRecord.from_key(k, rep) for k, rep in classes.items()),
                  key=DatabaseRecord.sort_key)


def manifest_hash(dim: int | None, max_volume: int | None, algorithm: str = ALGORITHM_VERSION) -> str:
    text = f"dim={dim};max_volume={max_volume};algorithm={algorithm}"
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def write_db(records: Iterable[DatabaseRecord], path: str, dim: int | None = None,
             max_volume: int | None = None) -> None:
    """Write ``records`` (sorted by volume, then key) atomically."""
    recs = list(records)
    keys = [r.sort_key() for r in recs]
    if keys != sorted(keys):
        raise ValueError("records must be sorted by (volume, key)")
    if dim is None and recs:
        dim = recs[0].dim
    lines = [
        "# lattice polytope database",
        f"# dim={dim} max_volume={max_volume} algorithm={ALGORITHM_VERSION} records={len(recs)}",
        f"# manifest={manifest_hash(dim, max_volume)}",
    ]
    lines += [r.to_line() for r in recs]
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def parse_line(line: str, lineno: int | None = None) -> DatabaseRecord:
    parts = line.split(";")
    if len(parts) != 3:
        raise FormatError("expected 'd;V;vertices'", lineno)
    try:
        d, v = int(parts[0]), int(parts[1])
        verts = tuple(tuple(int(x) for x in chunk.split(",")) for chunk in parts[2].split("|"))
    except ValueError as exc:
        raise FormatError(f"bad integer ({exc})", lineno) from None
    if d < 1 or v < 1 or any(len(p) != d for p in verts) or len(verts) < d + 1:
        raise FormatError("vertex list does not match the dimension", lineno)
    return DatabaseRecord(d, v, verts)


def read_db(path: str, check: bool = False) -> list[DatabaseRecord]:
    """Parse a database file; with ``check`` the stored volume is recomputed."""
    out = []
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            rec = parse_line(line, lineno)
            if check:
                try:
                    P = rec.polytope()
                except Exception as exc:
                    raise FormatError(f"not a full-dimensional polytope ({exc})", lineno) from None
                if P.volume != rec.volume:
                    raise FormatError(f"stored volume {rec.volume}, actual {P.volume}", lineno)
            out.append(rec)
    return out


def read_header(path: str) -> dict[str, str]:
    info: dict[str, str] = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            if not line.startswith("#"):
                break
            for tok in line[1:].split():
                if "=" in tok:
                    k, v = tok.split("=", 1)
                    info[k] = v
    return info


# ---------------------------------------------------------------------------
# resumable runs
# ---------------------------------------------------------------------------

@dataclass
class RunManifest:
    dim: int
    max_volume: int
    algorithm: str = ALGORITHM_VERSION
    completed: list[str] = field(default_factory=list)
    started: float = field(default_factory=time.time)
    jobs: int = 1

    def header(self) -> dict:
        return {"manifest": manifest_hash(self.dim, self.max_volume, self.algorithm),
                "dim": self.dim, "max_volume": self.max_volume, "algorithm": self.algorithm,
                "started": self.started, "jobs": self.jobs}


class Checkpoint:
    """JSON-lines log of finished seeds next to the output database.

    The first line is the run manifest; each later line holds one seed key and
    the classes it produced.  A torn final line from an interrupted write is
    ignored on load.
    """

    def __init__(self, path: str, manifest: RunManifest):
        self.path = path
        self.manifest = manifest
        self.classes: dict[str, tuple[Point, ...]] = {}

    @classmethod
    def open(cls, path: str, manifest: RunManifest, resume: bool) -> "Checkpoint":
        ck = cls(path, manifest)
        if resume and os.path.exists(path):
            ck._load()
        else:
            with open(path, "w", encoding="utf-8") as f:
                f.write(json.dumps(manifest.header(), sort_keys=True) + "\n")
        return ck

    def _load(self) -> None:
        with open(self.path, encoding="utf-8") as f:
            lines = f.read().split("\n")
        try:
            head = json.loads(lines[0])
        except (json.JSONDecodeError, IndexError):
            raise FormatError("unreadable checkpoint manifest", 1) from None
        if head.get("manifest") != self.manifest.header()["manifest"]:
            raise FormatError("checkpoint belongs to a different run", 1)
        self.manifest.started = head.get("started", self.manifest.started)
        good = [lines[0]]
        for line in lines[1:]:
            if not line:
                continue
            try:
                entry = json.loads(line)
            except json.JSONDecodeError:
                break  # torn write
            self.manifest.completed.append(entry["seed"])
            for k, rep in entry["classes"]:
                self.classes.setdefault(k, tuple(tuple(p) for p in rep))
            good.append(line)
        with open(self.path, "w", encoding="utf-8") as f:
            f.write("\n".join(good) + "\n")

    def record(self, seed: str, classes: dict[str, Sequence[Point]]) -> None:
        entry = {"seed": seed, "classes": sorted([k, [list(p) for p in rep]] for k, rep in classes.items())}
        with open(self.path, "a", encoding="utf-8") as f:
            f.write(json.dumps(entry) + "\n")
            f.flush()
        self.manifest.completed.append(seed)
        for k, rep in classes.items():
            self.classes.setdefault(k, tuple(tuple(p) for p in rep))


def run_enumeration(dim: int, max_volume: int, out: str, jobs: int = 1, resume: bool = False,
                    stop_after: int | None = None) -> list[DatabaseRecord] | None:
    """Enumerate with a checkpoint at ``out + '.ckpt'`` and write the database to ``out``.

    ``stop_after`` ends the run (without writing ``out``) once that many new
    seeds are done, which simulates an interruption.
    """
    from .growth import enumerate_polytopes

    manifest = RunManifest(dim, max_volume, jobs=jobs)
    ck = Checkpoint.open(out + ".ckpt", manifest, resume)
    done = [0]

    class _Stop(Exception):
        pass

    def on_seed(seed, classes):
        ck.record(seed, classes)
        done[0] += 1
        if stop_after is not None and done[0] >= stop_after:
            raise _Stop

    try:
        result = enumerate_polytopes(dim, max_volume, jobs=jobs,
                                     skip_seeds=list(manifest.completed), on_seed=on_seed)
    except _Stop:
        return None
    for k, rep in ck.classes.items():
        result.setdefault(k, rep)
    recs = records_from_classes(result)
    write_db(recs, out, dim, max_volume)
    return recs


# ---------------------------------------------------------------------------
# statistics and reference checks
# ---------------------------------------------------------------------------

COLUMNS = ("TOT", "SP", "VA", "IDP", "UC", "UT")
_COLUMN_PROP = {"SP": "spanning", "VA": "va", "IDP": "idp", "UC": "uc", "UT": "ut"}


@dataclass
class StatsTable:
    """Rows keyed by volume; a cell is ``None`` when some polytope of that volume lacks the flag."""

    rows: dict[int, dict[str, int | None]]

    def hierarchy_ok(self) -> bool:
        for row in self.rows.values():
            vals = [row.get(c) for c in COLUMNS]
            known = [v for v in vals if v is not None]
            if known != sorted(known, reverse=True):
                return False
        return True

    def column(self, name: str) -> list[int | None]:
        return [self.rows[v].get(name) for v in sorted(self.rows)]

    def to_csv(self, columns: Sequence[str] = COLUMNS) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["volume", *columns])
        for v in sorted(self.rows):
            w.writerow([v] + ["" if self.rows[v].get(c) is None else self.rows[v][c] for c in columns])
        return buf.getvalue()


def stats(records: Sequence[DatabaseRecord], props: dict[str, PropertyRecord] | None = None,
          columns: Sequence[str] = COLUMNS) -> StatsTable:
    """Per-volume counts; ``props`` maps canonical keys to computed property records."""
    rows: dict[int, dict[str, int | None]] = {}
    for rec in records:
        row = rows.setdefault(rec.volume, {c: 0 for c in columns})
        pr = props.get(rec.canonical_key()) if props else None
        for c in columns:
            if row[c] is None:
                continue
            if c == "TOT":
                row[c] += 1
                continue
            val = None if pr is None else (pr.smooth if c == "SMOOTH" else pr.get(_COLUMN_PROP[c]))
            if val is None:
                row[c] = None
            elif val:
                row[c] += 1
    return StatsTable(rows)


def load_fixture(name: str) -> StatsTable:
    """Packaged reference table, e.g. ``counts_d3`` or ``smooth_d3``."""
    text = resources.files("latpoly").joinpath("data", f"{name}.csv").read_text(encoding="utf-8")
    reader = csv.DictReader(line for line in text.splitlines() if not line.startswith("#"))
    rows = {}
    for r in reader:
        v = int(r.pop("volume"))
        rows[v] = {k: (int(x) if x else None) for k, x in r.items()}
    return StatsTable(rows)


@dataclass(frozen=True)
class Mismatch:
    volume: int
    column: str
    got: int | None
    expected: int | None


def verify(table: StatsTable, fixture: StatsTable, max_volume: int | None = None) -> list[Mismatch]:
    """Cell-by-cell comparison on the volumes ``1..max_volume`` (default: the table's largest).

    Only columns the table computed are compared.  Cells left blank on
    either side are skipped; a volume missing from the table counts as zero
    polytopes.
    """
    top = max_volume if max_volume is not None else max(table.rows, default=0)
    cols = {c for row in table.rows.values() for c in row}
    out = []
    for v in range(1, top + 1):
        if v not in fixture.rows:
            continue
        exp_row = fixture.rows[v]
        got_row = table.rows.get(v, {c: 0 for c in cols})
        for c, exp in exp_row.items():
            if c not in cols:
                continue
            got = got_row.get(c)
            if exp is None or got is None:
                continue
            if got != exp:
                out.append(Mismatch(v, c, got, exp))
    return out


@dataclass(frozen=True)
class DbDiff:
    only_left: tuple[str, ...]
    only_right: tuple[str, ...]

    def __bool__(self) -> bool:
        return bool(self.only_left or self.only_right)


def diff(left: Sequence[DatabaseRecord], right: Sequence[DatabaseRecord]) -> DbDiff:
    a = {r.canonical_key() for r in left}
    b = {r.canonical_key() for r in right}
    return DbDiff(tuple(sorted(a - b)), tuple(sorted(b - a)))


def write_analysis_csv(rows: Iterable[tuple[DatabaseRecord, int, PropertyRecord]], path: str | None) -> str:
    """CSV with columns key, volume, points and the six property flags."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "volume", "points", *PROPERTY_NAMES])
    for rec, npts, pr in rows:
        w.writerow([rec.canonical_key(), rec.volume, npts, *pr.as_row()])
    text = buf.getvalue()
    if path:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    return text


def read_analysis_csv(path: str) -> dict[str, PropertyRecord]:
    out = {}
    with open(path, encoding="utf-8", newline="") as f:
        for lineno, row in enumerate(csv.DictReader(f), 2):
            pr = PropertyRecord()
            try:
                for name in PROPERTY_NAMES:
                    cell = row[name]
                    val = None if cell == "" else bool(int(cell))
                    setattr(pr, {"va": "very_ample", "uc": "unimodular_cover",
                                 "ut": "unimodular_triangulation"}.get(name, name), val)
            except (KeyError, ValueError):
                raise FormatError("bad analysis row", lineno) from None
            out[row["key"]] = pr
    return out
