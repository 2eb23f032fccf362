"""Reference tables shipped as CSV, and comparison of computed results against them.

Identifiers: ``table1``, ``appendix-second``, ``appendix-first``,
``collisions``, ``theorem3-solutions``, ``survivors``, ``witnesses``.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources

from .combinatorics import StirlingKind
from .multiplicity import MultiplicityReport, ScanSummary

IDENTIFIERS = (
    "table1",
    "appendix-second",
    "appendix-first",
    "collisions",
    "theorem3-solutions",
    "survivors",
    "witnesses",
)

_FILES = {
    "table1": "table1.csv",
    "appendix-second": "appendix.csv",
    "appendix-first": "appendix.csv",
    "collisions": "collisions.csv",
    "theorem3-solutions": "theorem3_solutions.csv",
    "survivors": "survivors.csv",
    "witnesses": "witnesses.csv",
}

# the ten buckets of the reference count table
TABLE1_INTERVALS = tuple((10000 * i, 10000 * i + 9999) for i in range(9)) + ((90000, 100000),)


class IdentifierMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Erratum:
    table: str
    kind: int
    lo: int
    hi: int
    position: int
    printed: str
    corrected: int

    def describe(self) -> str:
        return (
            f"kind {self.kind} [{self.lo},{self.hi}] entry #{self.position}: "
            f"printed {self.printed!r}, corrected to {self.corrected}"
        )


@dataclass
class GoldenTable:
    identifier: str
    rows: list[dict]
    errata: list[Erratum] = field(default_factory=list)


@dataclass
class ComputedTable:
    """Computed rows in the same column layout as the matching golden CSV."""

    identifier: str
    rows: list[dict]


@dataclass
class DiffReport:
    identifier: str
    matches: int = 0
    mismatches: list[str] = field(default_factory=list)
    errata_matches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def lines(self) -> list[str]:
        status = "MATCH" if self.ok else "MISMATCH"
        out = [f"{self.identifier}: {status} ({self.matches} matching items, {len(self.mismatches)} mismatches)"]
        out += [f"  errata: {e}" for e in self.errata_matches]
        out += [f"  mismatch: {m}" for m in self.mismatches]
        return out


def _read_csv(name: str) -> list[dict]:
    text = resources.files("stirling_search").joinpath(f"data/{name}").read_text()
    return list(csv.DictReader(io.StringIO(text)))


def _load_errata() -> list[Erratum]:
    return [
        Erratum(r["table"], int(r["kind"]), int(r["lo"]), int(r["hi"]), int(r["position"]), r["printed"], int(r["corrected"]))
        for r in _read_csv("errata.csv")
    ]


def load_golden(identifier: str) -> GoldenTable:
    if identifier not in _FILES:
        raise KeyError(f"unknown golden table {identifier!r}; choose from {', '.join(IDENTIFIERS)}")
    rows = _read_csv(_FILES[identifier])
    errata: list[Erratum] = []
    if identifier.startswith("appendix-"):
        kind = 2 if identifier.endswith("second") else 1
        rows = [r for r in rows if int(r["kind"]) == kind]
        errata = [e for e in _load_errata() if e.table == "appendix" and e.kind == kind]
    return GoldenTable(identifier, rows, errata)


# -- builders: computed results in golden layout ---------------------------------

def table1_from_scans(second: ScanSummary, first: ScanSummary) -> ComputedTable:
    rows = []
    for lo, hi in TABLE1_INTERVALS:
        rows.append({
            "lo": lo,
            "hi": hi,
            "second": second.restrict(lo, hi).distinct_hits,
            "first": first.restrict(lo, hi).distinct_hits,
        })
    return ComputedTable("table1", rows)


def appendix_from_scan(summary: ScanSummary) -> ComputedTable:
    kind = StirlingKind(summary.kind)
    ident = "appendix-second" if kind is StirlingKind.SECOND else "appendix-first"
    rows = []
    for lo, hi in TABLE1_INTERVALS:
        if lo < summary.lo or hi > summary.hi:
            continue
        for i, v in enumerate(summary.restrict(lo, hi).values(with_duplicates=True)):
            rows.append({"kind": int(kind), "lo": lo, "hi": hi, "position": i, "value": v})
    return ComputedTable(ident, rows)


def collisions_from_reports(reports: list[MultiplicityReport]) -> ComputedTable:
    rows = [
        {"kind": int(r.kind), "a": r.a, "n": o.n, "k": o.k}
        for r in reports
        for o in r.occurrences
    ]
    return ComputedTable("collisions", rows)


def solutions_table(triples) -> ComputedTable:
    return ComputedTable("theorem3-solutions", [{"k": t.k, "n": t.n, "x": t.x} for t in triples])


def survivors_table(pairs) -> ComputedTable:
    return ComputedTable("survivors", [{"k": k, "n": n} for k, n in pairs])


def witnesses_table(rows) -> ComputedTable:
    return ComputedTable("witnesses", [{"k": k, "n": n, "p": p, "symbol": s} for k, n, p, s in rows])


# -- comparison --------------------------------------------------------------------

def _as_tuple(row: dict, columns: list[str]) -> tuple[int, ...]:
    return tuple(int(row[c]) for c in columns)


def _compare_sets(report: DiffReport, golden: GoldenTable, result: ComputedTable, columns: list[str]) -> None:
    want = Counter(_as_tuple(r, columns) for r in golden.rows)
    got = Counter(_as_tuple(r, columns) for r in result.rows)
    report.matches = sum((want & got).values())
    head = ",".join(columns)
    for item in sorted((want - got).elements()):
        report.mismatches.append(f"missing ({head})={item}")
    for item in sorted((got - want).elements()):
        report.mismatches.append(f"unexpected ({head})={item}")


def _compare_table1(report: DiffReport, golden: GoldenTable, result: ComputedTable) -> None:
    got = {(int(r["lo"]), int(r["hi"])): r for r in result.rows}
    for row in golden.rows:
        key = (int(row["lo"]), int(row["hi"]))
        if key not in got:
            report.mismatches.append(f"[{key[0]},{key[1]}] not computed")
            continue
        for col in ("second", "first"):
            want, have = int(row[col]), int(got[key][col])
            if want == have:
                report.matches += 1
            else:
                report.mismatches.append(f"[{key[0]},{key[1]}] {col} kind: reference {want}, computed {have}")


def _compare_appendix(report: DiffReport, golden: GoldenTable, result: ComputedTable, errata: bool) -> None:
    fixes = {(e.lo, e.hi, e.position): e for e in golden.errata} if errata else {}
    blocks: dict[tuple[int, int], list[int]] = {}
    for row in golden.rows:
        lo, hi, pos = int(row["lo"]), int(row["hi"]), int(row["position"])
        value = int(row["value"])
        fix = fixes.get((lo, hi, pos))
        if fix is not None and row["value"] == fix.printed:
            value = fix.corrected
            report.errata_matches.append(fix.describe())
        blocks.setdefault((lo, hi), []).append(value)
    computed: dict[tuple[int, int], list[int]] = {}
    for row in result.rows:
        computed.setdefault((int(row["lo"]), int(row["hi"])), []).append(int(row["value"]))
    for key in sorted(set(blocks) | set(computed)):
        want = Counter(blocks.get(key, []))
        got = Counter(computed.get(key, []))
        # 0 and 1 have infinite multiplicity: presence is all that is compared
        for trivial in (0, 1):
            if trivial in want:
                want[trivial] = 1
            if trivial in got:
                got[trivial] = 1
        report.matches += sum((want & got).values())
        for v in sorted((want - got).elements()):
            report.mismatches.append(f"[{key[0]},{key[1]}] reference value {v} not computed")
        for v in sorted((got - want).elements()):
            report.mismatches.append(f"[{key[0]},{key[1]}] computed value {v} not in reference")


def compare_golden(result: ComputedTable, table: GoldenTable, errata: bool = True) -> DiffReport:
    """Itemised comparison; with ``errata`` the known misprints count as matches."""
    if result.identifier != table.identifier:
        raise IdentifierMismatch(f"cannot compare {result.identifier!r} with {table.identifier!r}")
    report = DiffReport(table.identifier)
    ident = table.identifier
    if ident == "table1":
        _compare_table1(report, table, result)
    elif ident.startswith("appendix-"):
        _compare_appendix(report, table, result, errata)
    elif ident == "collisions":
        _compare_sets(report, table, result, ["kind", "a", "n", "k"])
    elif ident == "theorem3-solutions":
        _compare_sets(report, table, result, ["k", "n", "x"])
    elif ident == "survivors":
        _compare_sets(report, table, result, ["k", "n"])
    elif ident == "witnesses":
        _compare_sets(report, table, result, ["k", "n", "p", "symbol"])
    return report
