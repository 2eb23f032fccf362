"""Exact Stirling numbers, binomials and their associated (no-singleton) variants.

Everything here works on Python ints, so values are exact at any size.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator


class StirlingKind(enum.IntEnum):
    """Which Stirling triangle. FIRST is the unsigned (cycle-counting) kind."""

    FIRST = 1
    SECOND = 2

    @classmethod
    def parse(cls, value) -> "StirlingKind":
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            value = value.strip().lower()
            aliases = {"1": 1, "first": 1, "i": 1, "2": 2, "second": 2, "ii": 2}
            if value not in aliases:
                raise ValueError(f"unknown Stirling kind {value!r}")
            value = aliases[value]
        return cls(int(value))


def _check_natural(*values: int) -> None:
    for v in values:
        if v < 0:
            raise ValueError(f"expected a non-negative integer, got {v}")


def binomial(n: int, k: int) -> int:
    """C(n, k), zero when k > n."""
    _check_natural(n, k)
    return math.comb(n, k)


def factorial(n: int) -> int:
    _check_natural(n)
    return math.factorial(n)


def _row_step(row: list[int], n: int, kind: StirlingKind) -> list[int]:
    # row holds row n-1; returns row n
    new = [0] * (n + 1)
    second = kind is StirlingKind.SECOND
    for k in range(1, n + 1):
        right = row[k] if k < n else 0
        new[k] = row[k - 1] + (k if second else n - 1) * right
    return new


@dataclass(frozen=True)
class TriangleRow:
    n: int
    values: tuple[int, ...]
    kind: StirlingKind

    def __getitem__(self, k: int) -> int:
        return self.values[k]

    def __len__(self) -> int:
        return len(self.values)

    def is_log_concave(self) -> bool:
        v = self.values
        return all(v[k] * v[k] >= v[k - 1] * v[k + 1] for k in range(1, self.n))


def iter_rows(kind: StirlingKind, n_max: int | None = None, start: int = 0) -> Iterator[TriangleRow]:
    """Yield rows ``start..n_max`` of the triangle (forever if ``n_max`` is None).

    Only the previous row is kept alive, so long scans stay cheap in memory.
    """
    kind = StirlingKind.parse(kind)
    row = [1]
    n = 0
    while n_max is None or n <= n_max:
        if n >= start:
            yield TriangleRow(n, tuple(row), kind)
        n += 1
        row = _row_step(row, n, kind)


def stirling_row(n: int, kind: StirlingKind) -> TriangleRow:
    _check_natural(n)
    for row in iter_rows(kind, n, start=n):
        return row
    raise AssertionError("unreachable")


def _column_limited(n: int, k: int, weight) -> int:
    # generic O(n*k) triangle walk keeping only columns 0..k
    if k > n:
        return 0
    col = [1] + [0] * k
    for m in range(1, n + 1):
        for j in range(min(m, k), 0, -1):
            col[j] = col[j - 1] + weight(m, j) * col[j]
        col[0] = 0
    return col[k]


def stirling2(n: int, k: int) -> int:
    """Number of partitions of an n-set into k non-empty blocks."""
    _check_natural(n, k)
    if k > n:
        return 0
    if k == n:
        return 1
    if k == 0:
        return 0
    if k == 1:
        return 1
    if k == 2:
        return 2 ** (n - 1) - 1
    return _column_limited(n, k, lambda m, j: j)


def stirling1(n: int, k: int) -> int:
    """Unsigned Stirling number of the first kind: permutations of n letters with k cycles."""
    _check_natural(n, k)
    if k > n:
        return 0
    if k == n:
        return 1
    if k == 0:
        return 0
    if k == 1:
        return math.factorial(n - 1)
    return _column_limited(n, k, lambda m, j: m - 1)


def stirling(kind: StirlingKind, n: int, k: int) -> int:
    if StirlingKind.parse(kind) is StirlingKind.FIRST:
        return stirling1(n, k)
    return stirling2(n, k)


def _assoc(n: int, k: int, first_kind: bool) -> int:
    # second kind: A(m,j) = j*A(m-1,j) + (m-1)*A(m-2,j-1)
    # first kind:  D(m,j) = (m-1)*(D(m-1,j) + D(m-2,j-1))
    _check_natural(n, k)
    if 2 * k > n:
        return 1 if n == k == 0 else 0
    prev2 = [1] + [0] * k  # row m-2
    prev1 = [0] * (k + 1)  # row m-1 (m=1: nothing without singletons)
    if n == 0:
        return prev2[k]
    for m in range(2, n + 1):
        cur = [0] * (k + 1)
        for j in range(1, min(k, m // 2) + 1):
            if first_kind:
                cur[j] = (m - 1) * (prev1[j] + prev2[j - 1])
            else:
                cur[j] = j * prev1[j] + (m - 1) * prev2[j - 1]
        prev2, prev1 = prev1, cur
    return prev1[k]


def assoc_stirling2(n: int, k: int) -> int:
    """Partitions of an n-set into k blocks, none of them a singleton."""
    return _assoc(n, k, first_kind=False)


def assoc_stirling1(n: int, k: int) -> int:
    """Permutations of n letters with k cycles and no fixed point."""
    return _assoc(n, k, first_kind=True)


def assoc_stirling(kind: StirlingKind, n: int, k: int) -> int:
    if StirlingKind.parse(kind) is StirlingKind.FIRST:
        return assoc_stirling1(n, k)
    return assoc_stirling2(n, k)


def central_assoc_closed_form(b: int) -> int:
    """(2b)! / (b! 2^b): pairings of 2b points, the central no-singleton count."""
    _check_natural(b)
    q, r = divmod(math.factorial(2 * b), math.factorial(b) << b)
    assert r == 0
    return q


def stirling2_near_diagonal(n: int) -> int:
    """S(n, n-3) from its binomial closed form; no triangle is built."""
    if n < 4:
        raise ValueError(f"S(n, n-3) closed form needs n >= 4, got {n}")
    return math.comb(n, 4) + 10 * math.comb(n, 5) + 15 * math.comb(n, 6)


def verify_identity(n: int, k: int, kind: StirlingKind) -> bool:
    """Check the associated-number expansion of the entry at (n, n-k).

    Both kinds satisfy  T(n, n-k) = sum_{j=0..k} T_{>=2}(k+j, j) * C(n, k+j).
    """
    _check_natural(n, k)
    if n < k + 1:
        raise ValueError(f"identity requires n >= k + 1, got n={n}, k={k}")
    kind = StirlingKind.parse(kind)
    lhs = stirling(kind, n, n - k)
    rhs = sum(assoc_stirling(kind, k + j, j) * math.comb(n, k + j) for j in range(k + 1))
    return lhs == rhs
