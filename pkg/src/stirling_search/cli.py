"""Command-line front end.

Exit status: 0 on success, 1 when a golden comparison (or identity check)
finds a mismatch, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

from . import golden
from .bounds import ASYMPTOTIC_MIN_A, asymptotic_comparator, singmaster_bound
from .combinatorics import StirlingKind, iter_rows, stirling, stirling_row, verify_identity
from .diophantine import (
    DEFAULT_DIOF1_NMAX,
    DEFAULT_SIEVE_NMAX,
    DIRECT_ZONE,
    FULL_SIEVE_NMAX,
    extended_primes,
    k4_special,
    ramanujan_nagell,
    second_stage,
    sieve_k_values,
    sieve_polygonal,
    solve_diof1,
    solve_diof2,
    solve_polygonal_direct,
    verify_witness,
)
from .modular import resolve_prime_set
from .multiplicity import (
    InfiniteMultiplicityError,
    Occurrence,
    ScanSummary,
    find_collisions,
    multiplicity,
    scan_interval,
)


class UsageError(Exception):
    pass


# -- output ------------------------------------------------------------------------

def _render_table(records: list[dict]) -> str:
    if not records:
        return "(no rows)\n"
    cols = list(records[0])
    cells = [[str(r[c]) for c in cols] for r in records]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _render_csv(records: list[dict], columns: list[str] | None = None) -> str:
    buf = io.StringIO()
    cols = columns or (list(records[0]) if records else [])
    writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    writer.writeheader()
    writer.writerows(records)
    return buf.getvalue()


def emit(args, command: str, records: list[dict], meta: dict | None = None, columns: list[str] | None = None) -> None:
    """Write records in the chosen format; metadata goes inline for JSON, to stderr otherwise."""
    meta = meta or {}
    if args.format == "json":
        text = json.dumps({"command": command, "meta": meta, "records": records}, indent=1) + "\n"
    elif args.format == "csv":
        text = _render_csv(records, columns)
    else:
        text = _render_table(records)
    if meta and args.format != "json":
        for key, value in meta.items():
            print(f"# {key}: {value}", file=sys.stderr)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _positions(occ: list[Occurrence]) -> str:
    return " ".join(f"{o.n}:{o.k}" for o in occ)


# -- scan cache ----------------------------------------------------------------------

def _load_cache(path: Path, kind: StirlingKind, lo: int, hi: int, include_trivial: bool) -> ScanSummary | None:
    if not path.exists():
        return None
    with open(path) as fh:
        first = fh.readline().strip()
        if not first.startswith("#"):
            return None
        meta = dict(item.split("=") for item in first[1:].split(","))
        if int(meta["kind"]) != kind or int(meta["hi"]) < hi:
            return None
        hits: dict[int, list[Occurrence]] = {}
        for row in csv.DictReader(fh):
            value = int(row["value"])
            if lo <= value <= hi:
                hits.setdefault(value, []).append(Occurrence(int(row["n"]), int(row["k"]), kind))
    if include_trivial:
        for a in (0, 1):
            if lo <= a <= hi:
                hits[a] = []
    return ScanSummary(lo, hi, kind, dict(sorted(hits.items())), include_trivial)


def _write_cache(path: Path, kind: StirlingKind, hi: int) -> None:
    full = scan_interval(2, hi, kind)
    rows = sorted((o.n, o.k, a) for a, occ in full.hits.items() for o in occ)
    with open(path, "w") as fh:
        fh.write(f"#kind={int(kind)},hi={hi}\n")
        fh.write("kind,n,k,value\n")
        for n, k, a in rows:
            fh.write(f"{int(kind)},{n},{k},{a}\n")


def _scan(kind: StirlingKind, lo: int, hi: int, cache: str | None) -> ScanSummary:
    include_trivial = lo < 2
    if cache:
        path = Path(cache)
        summary = _load_cache(path, kind, lo, hi, include_trivial)
        if summary is not None:
            return summary
        _write_cache(path, kind, hi)
        summary = _load_cache(path, kind, lo, hi, include_trivial)
        assert summary is not None
        return summary
    return scan_interval(lo, hi, kind, include_trivial=include_trivial)


# -- subcommands -----------------------------------------------------------------------

def _kinds(value: str) -> list[StirlingKind]:
    if value == "both":
        return [StirlingKind.SECOND, StirlingKind.FIRST]
    return [StirlingKind.parse(value)]


def cmd_stirling(args) -> int:
    records = []
    for kind in _kinds(args.kind):
        if args.k is not None:
            records.append({"kind": int(kind), "n": args.n, "k": args.k, "value": stirling(kind, args.n, args.k)})
        else:
            row = stirling_row(args.n, kind)
            records += [{"kind": int(kind), "n": args.n, "k": k, "value": v} for k, v in enumerate(row.values)]
    emit(args, "stirling", records)
    return 0


def _report_diffs(reports: list[golden.DiffReport]) -> int:
    for rep in reports:
        for line in rep.lines():
            print(line, file=sys.stderr)
    return 0 if all(r.ok for r in reports) else 1


def _golden_for_scan(summary: ScanSummary, errata: bool) -> list[golden.DiffReport]:
    """Compare the reference buckets that lie wholly inside the scanned interval."""
    ident = "appendix-second" if summary.kind == StirlingKind.SECOND else "appendix-first"
    inside = [(lo, hi) for lo, hi in golden.TABLE1_INTERVALS if summary.lo <= lo and hi <= summary.hi]
    if not inside:
        raise UsageError("--compare=golden needs the scan to cover at least one reference interval")
    table = golden.load_golden(ident)
    table.rows = [r for r in table.rows if (int(r["lo"]), int(r["hi"])) in inside]
    computed = golden.appendix_from_scan(summary)
    computed.rows = [r for r in computed.rows if (r["lo"], r["hi"]) in inside]
    reports = [golden.compare_golden(computed, table, errata)]

    t1 = golden.load_golden("table1")
    col = "second" if summary.kind == StirlingKind.SECOND else "first"
    rep = golden.DiffReport(f"table1[{col}]")
    for row in t1.rows:
        lo, hi = int(row["lo"]), int(row["hi"])
        if (lo, hi) not in inside:
            continue
        have = summary.restrict(lo, hi).distinct_hits
        if have == int(row[col]):
            rep.matches += 1
        else:
            rep.mismatches.append(f"[{lo},{hi}]: reference {row[col]}, computed {have}")
    reports.append(rep)
    return reports


def cmd_scan(args) -> int:
    lo = 0 if args.lo is None else args.lo
    hi = args.hi
    if lo > hi or lo < 0:
        raise UsageError(f"invalid interval [{lo}, {hi}]")
    status = 0
    records = []
    for kind in _kinds(args.kind):
        summary = _scan(kind, lo, hi, args.cache)
        for a in sorted(summary.hits):
            occ = summary.hits[a]
            records.append({
                "kind": int(kind),
                "a": a,
                "count": len(occ) if a >= 2 else "inf",
                "positions": _positions(occ),
            })
        if args.compare == "golden":
            status |= _report_diffs(_golden_for_scan(summary, args.errata == "on"))
    meta = {"interval": f"[{lo},{hi}]", "distinct": len(records)}
    emit(args, "scan", records, meta, columns=["kind", "a", "count", "positions"])
    return status


def cmd_multiplicity(args) -> int:
    records = []
    for kind in _kinds(args.kind):
        try:
            rep = multiplicity(args.a, kind)
        except InfiniteMultiplicityError:
            records.append({"kind": int(kind), "a": args.a, "count": "inf", "positions": ""})
            continue
        records.append({"kind": int(kind), "a": args.a, "count": rep.count, "positions": _positions(list(rep.occurrences))})
    emit(args, "multiplicity", records)
    return 0


def cmd_collisions(args) -> int:
    records = []
    reports = []
    for kind in _kinds(args.kind):
        found = find_collisions(args.hi, kind)
        reports += found
        records += [{"kind": int(kind), "a": r.a, "count": r.count, "positions": _positions(list(r.occurrences))} for r in found]
    status = 0
    if args.compare == "golden":
        table = golden.load_golden("collisions")
        kinds = {int(k) for k in _kinds(args.kind)}
        table.rows = [r for r in table.rows if int(r["kind"]) in kinds and int(r["a"]) <= args.hi]
        status = _report_diffs([golden.compare_golden(golden.collisions_from_reports(reports), table)])
    emit(args, "collisions", records)
    return status


def cmd_bound(args) -> int:
    records = []
    for a in args.a:
        ev = singmaster_bound(a)
        rec = {"a": a, "log_a": ev.log_a, "w": ev.w_value, "b_limit": ev.b_limit, "bound": ev.bound}
        rec["asymptotic"] = asymptotic_comparator(a) if a >= ASYMPTOTIC_MIN_A else ""
        if args.check:
            rec["m2"] = multiplicity(a, StirlingKind.SECOND).count
            rec["m1"] = multiplicity(a, StirlingKind.FIRST).count
        records.append(rec)
    emit(args, "bound", records)
    return 0


def cmd_dio1(args) -> int:
    nmax = args.nmax or DEFAULT_DIOF1_NMAX
    t0 = time.perf_counter()
    pairs = solve_diof1(nmax, jobs=args.jobs)
    meta = {"n_range": f"[6,{nmax}]", "seconds": round(time.perf_counter() - t0, 3)}
    emit(args, "dio1", [{"n": n, "m": m} for n, m in pairs], meta, columns=["n", "m"])
    return 0


def cmd_dio2(args) -> int:
    nmax = args.nmax or 1000
    emit(args, "dio2", [{"n": n, "m": m} for n, m in solve_diof2(nmax)], {"n_range": f"[1,{nmax}]"}, columns=["n", "m"])
    return 0


def cmd_rn(args) -> int:
    nmax = args.nmax or 1000
    emit(args, "rn", [{"n": n, "value": v} for n, v in ramanujan_nagell(nmax)], {"n_range": f"[0,{nmax}]"}, columns=["n", "value"])
    return 0


def cmd_polygonal(args) -> int:
    nmax = args.nmax or DIRECT_ZONE
    triples = []
    for k in sieve_k_values(args.kmin, args.kmax):
        triples += solve_polygonal_direct(k, nmax)
    k4 = k4_special()
    meta = {"k4": f"n! = x^2 solutions {list(k4.closed_form_solutions)}; scan to n={k4.scan_limit} found {list(k4.scan_solutions)}"}
    status = 0
    if args.compare == "golden":
        table = golden.load_golden("theorem3-solutions")
        table.rows = [r for r in table.rows if args.kmin <= int(r["k"]) <= args.kmax and int(r["n"]) <= nmax]
        status = _report_diffs([golden.compare_golden(golden.solutions_table(triples), table)])
    emit(args, "polygonal", [{"k": t.k, "n": t.n, "x": t.x} for t in triples], meta, columns=["k", "n", "x"])
    return status


def cmd_sieve(args) -> int:
    nmax = args.nmax or (FULL_SIEVE_NMAX if args.full_scale else DEFAULT_SIEVE_NMAX)
    primes = resolve_prime_set(args.primes)
    k_values = sieve_k_values(args.kmin, args.kmax)
    t0 = time.perf_counter()
    report = sieve_polygonal(k_values, nmax, primes, direct_zone=args.direct_zone, jobs=args.jobs)
    elapsed = time.perf_counter() - t0
    second = {}
    if args.extend:
        extra = extended_primes(primes, args.extend)
        second = second_stage(report.open_survivors, extra)
    records = []
    for o in report.outcomes(include_eliminated=args.all):
        rec = {"k": o.k, "n": o.n, "disposition": o.disposition.value, "detail": "" if o.detail is None else o.detail}
        if args.extend:
            w = second.get((o.k, o.n))
            rec["second_stage"] = "" if w is None else w
        records.append(rec)
    meta = {
        "primes": f"{primes.label} ({len(primes)} primes {primes[0]}..{primes[-1]})",
        "k_range": f"[{args.kmin},{args.kmax}] without 4",
        "n_range": f"[2,{nmax}]",
        "direct_zone": args.direct_zone,
        "eliminated": report.eliminated_count(),
        "passed": len(report.passed),
        "open_survivors": len(report.open_survivors),
        "seconds": round(elapsed, 3),
    }
    if args.extend:
        meta["second_stage_eliminated"] = sum(w is not None for w in second.values())
    status = 0
    if args.compare == "golden":
        table = golden.load_golden("survivors")
        table.rows = [r for r in table.rows if int(r["k"]) in k_values and int(r["n"]) <= nmax]
        status = _report_diffs([golden.compare_golden(golden.survivors_table(report.passed), table)])
    columns = ["k", "n", "disposition", "detail"] + (["second_stage"] if args.extend else [])
    emit(args, "sieve", records, meta, columns=columns)
    return status


def cmd_verify_identities(args) -> int:
    nmax = args.nmax or 30
    records = []
    for kind in (StirlingKind.SECOND, StirlingKind.FIRST):
        checked = failed = 0
        for n in range(2, nmax + 1):
            for k in range(1, n):
                checked += 1
                failed += not verify_identity(n, k, kind)
        concave = all(row.is_log_concave() for row in iter_rows(kind, nmax))
        records.append({"kind": int(kind), "n_max": nmax, "checked": checked, "failed": failed, "log_concave": concave})
    emit(args, "verify-identities", records)
    return 0 if all(r["failed"] == 0 and r["log_concave"] for r in records) else 1


def cmd_compare(args) -> int:
    wanted = golden.IDENTIFIERS if args.table == "all" else (args.table,)
    errata = args.errata == "on"
    reports = []
    scans = {}
    if {"table1", "appendix-second", "appendix-first"} & set(wanted):
        for kind in (StirlingKind.SECOND, StirlingKind.FIRST):
            scans[kind] = scan_interval(0, 100000, kind, include_trivial=True)
    for ident in wanted:
        table = golden.load_golden(ident)
        if ident == "table1":
            computed = golden.table1_from_scans(scans[StirlingKind.SECOND], scans[StirlingKind.FIRST])
        elif ident == "appendix-second":
            computed = golden.appendix_from_scan(scans[StirlingKind.SECOND])
        elif ident == "appendix-first":
            computed = golden.appendix_from_scan(scans[StirlingKind.FIRST])
        elif ident == "collisions":
            found = find_collisions(100000, StirlingKind.SECOND) + find_collisions(100000, StirlingKind.FIRST)
            computed = golden.collisions_from_reports(found)
        elif ident == "theorem3-solutions":
            triples = [t for k in sieve_k_values(3, 50) for t in solve_polygonal_direct(k, DIRECT_ZONE)]
            computed = golden.solutions_table(triples)
        elif ident == "survivors":
            nmax = args.nmax or FULL_SIEVE_NMAX
            report = sieve_polygonal(sieve_k_values(3, 50), nmax, resolve_prime_set(args.primes), jobs=args.jobs)
            table.rows = [r for r in table.rows if int(r["n"]) <= nmax]
            computed = golden.survivors_table(report.passed)
        else:  # witnesses
            rows = [(int(r["k"]), int(r["n"]), int(r["p"])) for r in table.rows]
            computed = golden.witnesses_table([(k, n, p, verify_witness(k, n, p)) for k, n, p in rows])
        reports.append(golden.compare_golden(computed, table, errata))
    records = [
        {"table": r.identifier, "status": "match" if r.ok else "mismatch", "matches": r.matches,
         "mismatches": len(r.mismatches), "errata": len(r.errata_matches)}
        for r in reports
    ]
    status = _report_diffs(reports)
    emit(args, "compare", records)
    return status


# -- parser ------------------------------------------------------------------------------

def _positive(value: str) -> int:
    try:
        v = int(float(value)) if "e" in value.lower() else int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {value!r}")
    return v


def _natural(value: str) -> int:
    if value.strip() == "0":
        return 0
    return _positive(value)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "csv", "json"), default="table")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--jobs", type=_positive, default=1, help="worker processes for the heavy searches")
    common.add_argument("--compare", choices=("golden",), help="compare the result with the packaged reference tables")
    common.add_argument("--errata", choices=("on", "off"), default="on")

    parser = argparse.ArgumentParser(prog="stirling-search", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stirling", parents=[common], help="a triangle row or a single entry")
    p.add_argument("--kind", choices=("1", "2", "both"), default="2")
    p.add_argument("--n", type=_natural, required=True)
    p.add_argument("--k", type=_natural)
    p.set_defaults(func=cmd_stirling)

    p = sub.add_parser("scan", parents=[common], help="all values in [lo, hi] occurring in a triangle")
    p.add_argument("--kind", choices=("1", "2", "both"), default="2")
    p.add_argument("--lo", type=_natural, default=0)
    p.add_argument("--hi", type=_positive, required=True)
    p.add_argument("--cache", help="CSV cache of triangle entries (kind,n,k,value)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("multiplicity", parents=[common], help="occurrences of one value")
    p.add_argument("--kind", choices=("1", "2", "both"), default="both")
    p.add_argument("--a", type=_natural, required=True)
    p.set_defaults(func=cmd_multiplicity)

    p = sub.add_parser("collisions", parents=[common], help="values occurring at least twice")
    p.add_argument("--kind", choices=("1", "2", "both"), default="both")
    p.add_argument("--hi", type=_positive, default=100000)
    p.set_defaults(func=cmd_collisions)

    p = sub.add_parser("bound", parents=[common], help="Lambert-W multiplicity bound")
    p.add_argument("--a", type=_positive, nargs="+", required=True)
    p.add_argument("--check", action="store_true", help="also report both multiplicities")
    p.set_defaults(func=cmd_bound)

    for name, func, helptext in (
        ("dio1", cmd_dio1, "S(n, n-3) = C(m, 2)"),
        ("dio2", cmd_dio2, "n! = C(m, 2)"),
        ("rn", cmd_rn, "triangular numbers of the form 2^n - 1"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--nmax", type=_positive)
        p.set_defaults(func=func)

    p = sub.add_parser("polygonal", parents=[common], help="direct search of n! = P_k(x)")
    p.add_argument("--kmin", type=_positive, default=3)
    p.add_argument("--kmax", type=_positive, default=50)
    p.add_argument("--nmax", type=_positive)
    p.set_defaults(func=cmd_polygonal)

    p = sub.add_parser("sieve", parents=[common], help="quadratic-residue sieve for n! = P_k(x)")
    p.add_argument("--kmin", type=_positive, default=3)
    p.add_argument("--kmax", type=_positive, default=50)
    p.add_argument("--nmax", type=_positive)
    p.add_argument("--full-scale", action="store_true", help=f"n_max = {FULL_SIEVE_NMAX} unless --nmax is given")
    p.add_argument("--primes", default="builtin-paper", help="builtin-paper, builtin-first20 or a file with one prime per line")
    p.add_argument("--direct-zone", type=_natural, default=DIRECT_ZONE)
    p.add_argument("--extend", type=_natural, default=0, help="re-test open survivors against this many further primes")
    p.add_argument("--all", action="store_true", help="also list eliminated pairs")
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("verify-identities", parents=[common], help="associated-Stirling expansions and log-concavity")
    p.add_argument("--nmax", type=_positive)
    p.set_defaults(func=cmd_verify_identities)

    p = sub.add_parser("compare", parents=[common], help="recompute and compare reference tables")
    p.add_argument("--table", choices=("all",) + golden.IDENTIFIERS, default="all")
    p.add_argument("--nmax", type=_positive, help="sieve range for the survivors table")
    p.add_argument("--primes", default="builtin-paper")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError, KeyError) as exc:
        print(f"stirling-search: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
