"""End-to-end acceptance checks.

Each test carries a ``criterion`` marker; the terminal summary folds them
into one PASS/FAIL line per criterion.
"""
import math
import time

import pytest

from stirling_search import golden
from stirling_search.bounds import lambert_w0, singmaster_bound
from stirling_search.cli import main
from stirling_search.combinatorics import (
    StirlingKind,
    iter_rows,
    stirling,
    stirling1,
    stirling2,
    verify_identity,
)
from stirling_search.diophantine import (
    extended_primes,
    ramanujan_nagell,
    second_stage,
    sieve_k_values,
    sieve_polygonal,
    solve_diof1,
    solve_diof2,
    solve_polygonal_direct,
    verify_witness,
)
from stirling_search.modular import reference_primes
from stirling_search.multiplicity import find_collisions, scan_interval

from oracles import partition_counts, permutation_counts

SECOND, FIRST = StirlingKind.SECOND, StirlingKind.FIRST
criterion = pytest.mark.criterion

LARGE_SURVIVORS = [(5, 54545), (12, 93137), (17, 12797), (28, 78842), (33, 53361), (35, 92666), (38, 11846)]
SMALL_SURVIVORS = sorted(
    [(5, 2)] + [(k, 3) for k in (3, 6, 9, 14, 23, 42)] + [(k, 4) for k in (9, 24, 27)]
    + [(k, 5) for k in (3, 6, 8, 30, 32, 41)] + [(41, 8)]
)
SEVEN_TRIPLES = [(3, 3, 3), (3, 5, 15), (6, 3, 2), (6, 5, 8), (9, 4, 3), (24, 4, 2), (41, 5, 3)]


def timed(fn, *args, **kwargs):
    start = time.perf_counter()
    result = fn(*args, **kwargs)
    return result, time.perf_counter() - start


@pytest.fixture(scope="module")
def full_scans():
    return {kind: scan_interval(0, 100000, kind, include_trivial=True) for kind in (SECOND, FIRST)}


@pytest.fixture(scope="module")
def full_sieve():
    return timed(sieve_polygonal, sieve_k_values(3, 50), 10**5, reference_primes())


# 1


@criterion("1", "distinct-hit counts per interval, both kinds")
def test_interval_counts():
    start = time.perf_counter()
    counts = {}
    for kind in (SECOND, FIRST):
        for lo, hi in golden.TABLE1_INTERVALS:
            counts[(kind, lo)] = scan_interval(lo, hi, kind, include_trivial=True).distinct_hits
    elapsed = time.perf_counter() - start
    assert elapsed < 60
    expected = {}
    for row in golden.load_golden("table1").rows:
        expected[(SECOND, int(row["lo"]))] = int(row["second"])
        expected[(FIRST, int(row["lo"]))] = int(row["first"])
    assert counts[(SECOND, 0)] == 176 and counts[(FIRST, 0)] == 169
    wrong = {key: (counts[key], expected[key]) for key in expected if counts[key] != expected[key]}
    assert not wrong, f"computed vs tabulated: {wrong}"


# 2


@criterion("2", "collision sets up to 100000")
def test_collisions():
    def as_map(reports):
        return {r.a: sorted((o.n, o.k) for o in r.occurrences) for r in reports}

    assert as_map(find_collisions(100000, SECOND)) == {
        15: [(5, 2), (6, 5)],
        4095: [(13, 2), (91, 90)],
        66066: [(14, 11), (364, 363)],
    }
    assert as_map(find_collisions(100000, FIRST)) == {6: [(4, 1), (4, 3)], 120: [(6, 1), (16, 15)]}


# 3


@criterion("3", "multiplicity bound and W residual over [2, 100000]")
@pytest.mark.parametrize("kind", [SECOND, FIRST])
def test_bound_validity(full_scans, kind):
    checked = 0
    for a, occ in full_scans[kind].hits.items():
        if a < 2:
            continue
        ev = singmaster_bound(a)
        x = 0.5 * math.log(a)
        assert abs(ev.w_value * math.exp(ev.w_value) - x) <= 1e-12 * x
        assert len(occ) <= 2 + 2 * math.log(a) / lambert_w0(x)
        checked += 1
    assert checked > 400


# 4


@criterion("4", "triangular near-diagonal equation to n = 100000")
def test_diof1():
    result, elapsed = timed(solve_diof1, 10**5)
    assert result == [(14, 364)]
    assert elapsed < 5


# 5


@criterion("5", "direct zone solutions for 3 <= k <= 50, n <= 8")
def test_direct_zone():
    found = [(t.k, t.n, t.x) for k in sieve_k_values(3, 50) for t in solve_polygonal_direct(k, 8)]
    assert found == SEVEN_TRIPLES


# 6


@criterion("6", "polygonal sieve survivors")
def test_sieve_full_scale(full_sieve):
    report, elapsed = full_sieve
    assert elapsed < 300
    expected = sorted(SMALL_SURVIVORS + LARGE_SURVIVORS)
    assert sorted(tuple(int(v) for v in r.values()) for r in golden.load_golden("survivors").rows) == expected
    passed = report.passed
    missing = sorted(set(expected) - set(passed))
    extra = sorted(set(passed) - set(expected))
    assert not missing and not extra, f"missing {missing}, extra {extra}"


@criterion("6", "polygonal sieve survivors")
def test_sieve_desk_scale():
    report, elapsed = timed(sieve_polygonal, sieve_k_values(3, 50), 10**4, reference_primes())
    assert elapsed < 30
    assert report.passed == SMALL_SURVIVORS


# 7


@criterion("7", "witness symbols and extended-prime pass")
def test_witness_symbols():
    assert verify_witness(3, 54545, 100279) == -1
    rows = golden.load_golden("witnesses").rows
    assert len(rows) == 7
    symbols = {(int(r["k"]), int(r["n"]), int(r["p"])): verify_witness(int(r["k"]), int(r["n"]), int(r["p"])) for r in rows}
    assert all(s == -1 for s in symbols.values()), symbols


@criterion("7", "witness symbols and extended-prime pass")
def test_extended_pass(full_sieve):
    report, _ = full_sieve
    ext = extended_primes(report.primes, 10)
    survivors = sorted(set(report.open_survivors) | set(LARGE_SURVIVORS))
    fates = second_stage(survivors, ext)
    assert all(fates[pair] is not None for pair in LARGE_SURVIVORS), fates
    assert all(p is not None for p in fates.values()), fates


# 8


@criterion("8", "factorial triangular equation and Ramanujan-Nagell to 1000")
def test_diof2_and_rn():
    start = time.perf_counter()
    assert solve_diof2(1000) == [(1, 2), (3, 4), (5, 16)]
    assert sorted({v for _, v in ramanujan_nagell(1000)}) == [0, 1, 3, 15, 4095]
    assert time.perf_counter() - start < 10


# 9


@criterion("9", "identity suites, enumeration oracles, row sums, monotonicity")
def test_identity_suites():
    for kind in (SECOND, FIRST):
        for n in range(2, 31):
            for k in range(1, n):
                assert verify_identity(n, k, kind), (kind, n, k)


@criterion("9", "identity suites, enumeration oracles, row sums, monotonicity")
def test_enumeration_oracles():
    for n in range(10):
        parts, _ = partition_counts(n)
        perms, _ = permutation_counts(n)
        for k in range(n + 1):
            assert stirling2(n, k) == parts[k]
            assert stirling1(n, k) == perms[k]


@criterion("9", "identity suites, enumeration oracles, row sums, monotonicity")
def test_row_sums():
    for row in iter_rows(FIRST, 200):
        assert sum(row.values) == math.factorial(row.n)


@criterion("9", "identity suites, enumeration oracles, row sums, monotonicity")
@pytest.mark.parametrize("kind", [SECOND, FIRST])
def test_monotonicity(kind):
    grid = [[stirling(kind, i + j, i) for j in range(61)] for i in range(61)]
    for i in range(1, 60):
        for j in range(60):
            assert grid[i][j] <= grid[i + 1][j]
            assert grid[i][j] <= grid[i][j + 1]
    central = [stirling(kind, 2 * n, n) for n in range(1, 61)]
    assert all(a < b for a, b in zip(central, central[1:]))


# 10


@criterion("10", "value lists against the reference tables, errata on")
@pytest.mark.parametrize("kind,ident", [(SECOND, "appendix-second"), (FIRST, "appendix-first")])
def test_value_lists(full_scans, kind, ident):
    rep = golden.compare_golden(golden.appendix_from_scan(full_scans[kind]), golden.load_golden(ident))
    assert rep.ok, rep.mismatches
    if kind is SECOND:
        assert len(rep.errata_matches) == 1 and "60031" in rep.errata_matches[0]


@criterion("10", "value lists against the reference tables, errata on")
def test_value_lists_exit_status(capsys):
    assert main(["compare", "--table=appendix-second"]) == 0
    assert main(["compare", "--table=appendix-first"]) == 0
    assert main(["compare", "--table=appendix-second", "--errata=off"]) == 1
    capsys.readouterr()
