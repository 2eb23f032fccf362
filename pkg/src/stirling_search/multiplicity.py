"""Occurrence counting in the Stirling triangles.

A row of either triangle is log-concave, hence unimodal, so inside a row the
entries that are <= some ceiling form a prefix and a suffix of columns
1..n-1.  The smallest interior entry of row n is C(n, 2) (column n-1) once
n >= 4 for the first kind (``(n-1)! >= C(n, 2)``) and n >= 3 for the second
kind (``2^(n-1) - 1 >= C(n, 2)``), so rows with C(n, 2) > a never hold a.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

from .combinatorics import StirlingKind, iter_rows, stirling


class InfiniteMultiplicityError(ValueError):
    """Raised for 0 and 1, which sit in every row of both triangles."""


@dataclass(frozen=True, order=True)
class Occurrence:
    n: int
    k: int
    kind: StirlingKind = field(compare=False)

    def value(self) -> int:
        return stirling(self.kind, self.n, self.k)


@dataclass(frozen=True)
class MultiplicityReport:
    a: int
    kind: StirlingKind
    occurrences: tuple[Occurrence, ...]

    @property
    def count(self) -> int:
        return len(self.occurrences)

    @property
    def positions(self) -> list[tuple[int, int]]:
        return [(o.n, o.k) for o in self.occurrences]


@dataclass
class ScanSummary:
    lo: int
    hi: int
    kind: StirlingKind
    hits: dict[int, list[Occurrence]]
    include_trivial: bool = False

    @property
    def distinct_hits(self) -> int:
        return len(self.hits)

    def values(self, with_duplicates: bool = False) -> list[int]:
        """Sorted hit values; duplicates repeat a value once per occurrence.

        The synthetic entries for 0 and 1 always appear exactly once.
        """
        out = []
        for a in sorted(self.hits):
            reps = len(self.hits[a]) if with_duplicates and a >= 2 else 1
            out.extend([a] * reps)
        return out

    def restrict(self, lo: int, hi: int) -> "ScanSummary":
        """Sub-interval view, so one pass over [0, 10^5] serves every Table-1 bucket."""
        if lo < self.lo or hi > self.hi or lo > hi:
            raise ValueError(f"[{lo}, {hi}] is not inside [{self.lo}, {self.hi}]")
        hits = {a: occ for a, occ in self.hits.items() if lo <= a <= hi}
        return ScanSummary(lo, hi, self.kind, hits, self.include_trivial and lo <= 1)


def row_limit(a: int) -> int:
    """Largest n with C(n, 2) <= a, i.e. floor((1 + sqrt(1 + 8a)) / 2)."""
    if a < 2:
        raise ValueError(f"row limit is defined for a >= 2, got {a}")
    return (1 + math.isqrt(1 + 8 * a)) // 2


def _row_hits(row, lo: int, hi: int):
    """Columns 1..n of one row whose value lies in [lo, hi].

    Walks in from both ends and stops at the first entry above ``hi``;
    unimodality makes that exhaustive.
    """
    v = row.values
    n = row.n
    found = []
    k = 1
    while k <= n and v[k] <= hi:
        if v[k] >= lo:
            found.append(k)
        k += 1
    left_stop = k
    k = n
    while k > left_stop and v[k] <= hi:
        if v[k] >= lo:
            found.append(k)
        k -= 1
    return sorted(found)


def scan_interval(lo: int, hi: int, kind: StirlingKind, include_trivial: bool = False) -> ScanSummary:
    """Every position in rows 2..row_limit(hi) whose value lies in [lo, hi].

    With ``include_trivial`` the interval may start at 0 or 1; those values get
    a single symbolic hit each (they occur infinitely often) and an empty
    occurrence list.
    """
    kind = StirlingKind.parse(kind)
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if lo < 2 and not include_trivial:
        raise ValueError("intervals reaching below 2 need include_trivial=True")
    hits: dict[int, list[Occurrence]] = defaultdict(list)
    if include_trivial:
        for a in (0, 1):
            if lo <= a <= hi:
                hits[a] = []
    eff_lo = max(lo, 2)
    if hi >= 2:
        # max(..., 3) keeps the first-kind rows n <= 3 where (n-1)! < C(n, 2)
        for row in iter_rows(kind, max(row_limit(hi), 3), start=2):
            for k in _row_hits(row, eff_lo, hi):
                hits[row.values[k]].append(Occurrence(row.n, k, kind))
    return ScanSummary(lo, hi, kind, dict(hits), include_trivial)


def multiplicity(a: int, kind: StirlingKind) -> MultiplicityReport:
    """M(a): how many positions (n, k), 1 <= k <= n, of the triangle hold a."""
    kind = StirlingKind.parse(kind)
    if a in (0, 1):
        raise InfiniteMultiplicityError(f"{a} occurs in every row: infinite multiplicity")
    if a < 0:
        raise ValueError(f"negative target {a}")
    occ = scan_interval(a, a, kind).hits.get(a, [])
    return MultiplicityReport(a, kind, tuple(sorted(occ)))


def find_collisions(hi: int, kind: StirlingKind) -> list[MultiplicityReport]:
    """All a in [2, hi] that occur at least twice, in increasing order of a."""
    kind = StirlingKind.parse(kind)
    if hi < 2:
        raise ValueError(f"hi must be >= 2, got {hi}")
    summary = scan_interval(2, hi, kind)
    return [
        MultiplicityReport(a, kind, tuple(sorted(occ)))
        for a, occ in sorted(summary.hits.items())
        if len(occ) >= 2
    ]


def minimal_central_index(a: int, kind: StirlingKind) -> int:
    """Smallest b >= 1 whose central entry T(2b, b) exceeds a."""
    kind = StirlingKind.parse(kind)
    if a < 1:
        raise ValueError(f"a must be >= 1, got {a}")
    b = 1
    while stirling(kind, 2 * b, b) <= a:
        b += 1
    return b
