"""Searches for equal values between factorials, polygonal numbers and Stirling entries.

The central equation is n! = P_k(x) with P_k(x) = x((k-2)x - k + 4)/2.
Completing the square turns it into

    8(k-2) n! + (k-4)^2 = (2(k-2)x + 4 - k)^2,

so a prime p for which the left side is a non-residue rules out (k, n).
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import numpy as np

from .combinatorics import stirling2_near_diagonal
from .modular import (
    FactorialResidueStream,
    PrimeSet,
    factorial_residues,
    legendre,
    legendre_table,
    primes_above,
)

DIRECT_ZONE = 8
DEFAULT_SIEVE_NMAX = 10**4
FULL_SIEVE_NMAX = 10**5
DEFAULT_DIOF1_NMAX = 10**5


def polygonal(k: int, x: int) -> int:
    """The x-th k-gonal number."""
    if k < 3:
        raise ValueError(f"gonality must be >= 3, got {k}")
    if x < 0:
        raise ValueError(f"index must be >= 0, got {x}")
    twice = x * ((k - 2) * x - k + 4)
    assert twice % 2 == 0
    return twice // 2


def integer_sqrt_exact(n: int) -> Optional[int]:
    """r with r*r == n, or None when n is not a perfect square."""
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def polygonal_index(k: int, value: int) -> Optional[int]:
    """x >= 0 with P_k(x) == value, if one exists."""
    y = integer_sqrt_exact(8 * (k - 2) * value + (k - 4) ** 2)
    if y is None:
        return None
    q, r = divmod(y + k - 4, 2 * (k - 2))
    if r or q < 0:
        return None
    return q


def triangular_root(value: int) -> Optional[int]:
    """m with m(m-1)/2 == value, if one exists."""
    y = integer_sqrt_exact(8 * value + 1)
    if y is None:
        return None
    return (1 + y) // 2


# -- S(n, n-3) = C(m, 2) ------------------------------------------------------

def _diof1_block(bounds: tuple[int, int]) -> list[tuple[int, int]]:
    lo, hi = bounds
    out = []
    for n in range(lo, hi + 1):
        m = triangular_root(stirling2_near_diagonal(n))
        if m is not None:
            out.append((n, m))
    return out


def _blocks(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    size = max(1, -(-(hi - lo + 1) // parts))
    return [(a, min(a + size - 1, hi)) for a in range(lo, hi + 1, size)]


def solve_diof1(n_max: int = DEFAULT_DIOF1_NMAX, jobs: int = 1) -> list[tuple[int, int]]:
    """Pairs (n, m), 6 <= n <= n_max, with S(n, n-3) = C(m, 2)."""
    if n_max < 6:
        raise ValueError(f"n_max must be >= 6, got {n_max}")
    if jobs <= 1:
        return _diof1_block((6, n_max))
    # many small blocks keep the workers balanced; later n cost more
    blocks = _blocks(6, n_max, 8 * jobs)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return [pair for part in pool.map(_diof1_block, blocks) for pair in part]


# -- n! = C(m, 2) ---------------------------------------------------------------

def solve_diof2(n_max: int) -> list[tuple[int, int]]:
    """Pairs (n, m), 1 <= n <= n_max, m > 1, with n! = m(m-1)/2."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    out = []
    f = 1
    for n in range(1, n_max + 1):
        f *= n
        m = triangular_root(f)
        if m is not None and m > 1:
            out.append((n, m))
    return out


def ramanujan_nagell(n_max: int) -> list[tuple[int, int]]:
    """(n, 2^n - 1) for every n <= n_max where 2^n - 1 is triangular."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    return [(n, (1 << n) - 1) for n in range(n_max + 1) if triangular_root((1 << n) - 1) is not None]


# -- n! = P_k(x) -------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class SolutionTriple:
    k: int
    n: int
    x: int

    def check(self) -> bool:
        lhs = 8 * (self.k - 2) * math.factorial(self.n) + (self.k - 4) ** 2
        rhs = (2 * (self.k - 2) * self.x + 4 - self.k) ** 2
        return lhs == rhs and math.factorial(self.n) == polygonal(self.k, self.x)


def _check_gonality(k: int) -> None:
    if k < 3:
        raise ValueError(f"gonality must be >= 3, got {k}")
    if k == 4:
        raise ValueError("k = 4 (n! = x^2) is handled by k4_special")


def solve_polygonal_direct(k: int, n_max: int, n_min: int = 2) -> list[SolutionTriple]:
    """Exact search for n! = P_k(x) with n_min <= n <= n_max and x > 1."""
    _check_gonality(k)
    out = []
    f = math.factorial(n_min - 1) if n_min >= 1 else 1
    for n in range(max(n_min, 1), n_max + 1):
        f *= n
        x = polygonal_index(k, f)
        if x is not None and x > 1:
            out.append(SolutionTriple(k, n, x))
    return out


@dataclass(frozen=True)
class K4Report:
    """n! = x^2: only n = 1 (and 0! by convention) is a square factorial."""

    closed_form_solutions: tuple[tuple[int, int], ...]
    scan_limit: int
    scan_solutions: tuple[tuple[int, int], ...]

    @property
    def consistent(self) -> bool:
        return self.scan_solutions == self.closed_form_solutions


def k4_special(scan_limit: int = 30) -> K4Report:
    # for n >= 2 a prime in (n/2, n] divides n! exactly once
    found = []
    f = 1
    for n in range(1, scan_limit + 1):
        f *= n
        r = integer_sqrt_exact(f)
        if r is not None:
            found.append((n, r))
    return K4Report(((1, 1),), scan_limit, tuple(found))


class Disposition(str, enum.Enum):
    SOLUTION = "solution"
    ELIMINATED = "eliminated"
    EXHAUSTED = "exhausted"  # passed every prime, no solution by direct check
    SURVIVOR = "survivor"


@dataclass(frozen=True)
class SieveOutcome:
    k: int
    n: int
    disposition: Disposition
    witness: Optional[int] = None  # eliminating prime
    x: Optional[int] = None

    @property
    def detail(self) -> Optional[int]:
        return self.witness if self.disposition is Disposition.ELIMINATED else self.x


def sieve_k_values(kmin: int = 3, kmax: int = 50) -> list[int]:
    if kmin < 3 or kmax < kmin:
        raise ValueError(f"invalid k range [{kmin}, {kmax}]")
    return [k for k in range(kmin, kmax + 1) if k != 4]


@dataclass
class SieveReport:
    k_values: list[int]
    n_max: int
    primes: PrimeSet
    direct_zone: int
    witnesses: dict[int, np.ndarray]  # k -> first eliminating prime per n, 0 if none
    resolved: dict[tuple[int, int], SieveOutcome] = field(default_factory=dict)
    trivial_roots: int = 0  # direct-zone roots dropped because x <= 1

    def outcome(self, k: int, n: int) -> SieveOutcome:
        w = int(self.witnesses[k][n])
        if w:
            return SieveOutcome(k, n, Disposition.ELIMINATED, witness=w)
        return self.resolved[(k, n)]

    def outcomes(self, include_eliminated: bool = False) -> Iterator[SieveOutcome]:
        """Outcomes in (k, n) order; eliminated ones only on request."""
        for k in self.k_values:
            if include_eliminated:
                for n in range(2, self.n_max + 1):
                    yield self.outcome(k, n)
            else:
                for n in np.flatnonzero(self.witnesses[k][2:] == 0) + 2:
                    yield self.resolved[(k, int(n))]

    @property
    def passed(self) -> list[tuple[int, int]]:
        """Every (k, n) that no prime eliminated, direct zone included."""
        return sorted(self.resolved)

    @property
    def open_survivors(self) -> list[tuple[int, int]]:
        return sorted(key for key, o in self.resolved.items() if o.disposition is Disposition.SURVIVOR)

    @property
    def solutions(self) -> list[SolutionTriple]:
        return sorted(
            SolutionTriple(o.k, o.n, o.x)
            for o in self.resolved.values()
            if o.disposition is Disposition.SOLUTION
        )

    def eliminated_count(self) -> int:
        return sum(int(np.count_nonzero(w[2:])) for w in self.witnesses.values())


_worker_state: dict = {}


def _init_worker(primes: tuple[int, ...], n_max: int) -> None:
    _worker_state["residues"] = [(p, factorial_residues(p, n_max), legendre_table(p)) for p in primes]


def _sieve_one_k(k: int) -> tuple[int, np.ndarray]:
    residues = _worker_state["residues"]
    n_len = len(residues[0][1])
    witness = np.zeros(n_len, dtype=np.int64)
    scale, shift = 8 * (k - 2), (k - 4) ** 2
    for p, fact, table in residues:
        open_ = witness == 0
        if not open_.any():
            break
        symbols = table[(scale * fact + shift) % p]
        witness[open_ & (symbols == -1)] = p
    witness[:2] = 0
    return k, witness


def sieve_polygonal(
    k_values: Iterable[int],
    n_max: int,
    primes: PrimeSet,
    direct_zone: int = DIRECT_ZONE,
    jobs: int = 1,
) -> SieveReport:
    """Quadratic-residue sieve for n! = P_k(x) over 2 <= n <= n_max.

    Each (k, n) is eliminated by the first prime of ``primes`` (in order)
    where 8(k-2) n! + (k-4)^2 is a non-residue.  A symbol of 0 proves
    nothing and never eliminates.  Pairs that pass every prime are settled
    exactly when n <= direct_zone and left as survivors otherwise.
    """
    k_values = list(k_values)
    for k in k_values:
        _check_gonality(k)
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    prime_tuple = tuple(primes)
    if jobs <= 1:
        _init_worker(prime_tuple, n_max)
        results = [_sieve_one_k(k) for k in k_values]
    else:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(prime_tuple, n_max)) as pool:
            results = list(pool.map(_sieve_one_k, k_values))
    witnesses = dict(results)

    report = SieveReport(sorted(k_values), n_max, primes, direct_zone, witnesses)
    for k in report.k_values:
        for n in np.flatnonzero(witnesses[k][2:] == 0) + 2:
            n = int(n)
            if n <= direct_zone:
                x = polygonal_index(k, math.factorial(n))
                if x is not None and x > 1:
                    o = SieveOutcome(k, n, Disposition.SOLUTION, x=x)
                else:
                    if x is not None:
                        report.trivial_roots += 1
                    o = SieveOutcome(k, n, Disposition.EXHAUSTED)
            else:
                o = SieveOutcome(k, n, Disposition.SURVIVOR)
            report.resolved[(k, n)] = o
    return report


def verify_witness(k: int, n: int, p: int) -> int:
    """Legendre symbol of 8(k-2) n! + (k-4)^2 modulo p, with n! mod p streamed."""
    stream = FactorialResidueStream(p)
    while stream.n < n:
        stream.advance()
    return legendre(8 * (k - 2) * stream.residue + (k - 4) ** 2, p)


def extended_primes(primes: PrimeSet, count: int = 10) -> PrimeSet:
    """The ``count`` primes following the largest prime of ``primes``."""
    return primes_above(max(primes), count, f"next{count}>{max(primes)}")


def second_stage(pairs: Iterable[tuple[int, int]], primes: PrimeSet) -> dict[tuple[int, int], Optional[int]]:
    """Re-test pairs against further primes; maps each pair to its first witness (or None)."""
    pairs = sorted(set(pairs))
    by_n_max = max((n for _, n in pairs), default=0)
    residues = {p: factorial_residues(p, by_n_max) for p in primes}
    out = {}
    for k, n in pairs:
        out[(k, n)] = None
        for p in primes:
            if legendre(8 * (k - 2) * int(residues[p][n]) + (k - 4) ** 2, p) == -1:
                out[(k, n)] = p
                break
    return out

