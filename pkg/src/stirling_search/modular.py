"""Word-sized modular arithmetic behind the quadratic-residue sieve."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

# deterministic for n < 3.3 * 10^24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeSet:
    primes: tuple[int, ...]
    label: str = "custom"

    def __post_init__(self):
        ps = self.primes
        if not ps:
            raise ValueError("empty prime set")
        for p in ps:
            if p <= 2 or not is_prime(p):
                raise ValueError(f"{p} is not an odd prime")
        if any(a >= b for a, b in zip(ps, ps[1:])):
            raise ValueError("prime set must be strictly ascending")

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)

    def __getitem__(self, i):
        return self.primes[i]


def next_prime(n: int) -> int:
    p = n + 1
    while not is_prime(p):
        p += 1
    return p


def primes_above(lo: int, count: int, label: str | None = None) -> PrimeSet:
    """The first ``count`` primes strictly greater than ``lo`` (odd ones only)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    out = []
    p = max(lo, 2)
    while len(out) < count:
        p = next_prime(p)
        out.append(p)
    return PrimeSet(tuple(out), label or f"first{count}>{lo}")


def load_primes(path: str | Path, label: str | None = None) -> PrimeSet:
    """Read one prime per line; blank lines and ``#`` comments are skipped."""
    primes = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                primes.append(int(line))
    return PrimeSet(tuple(primes), label or str(path))


def reference_primes() -> PrimeSet:
    """The 19 primes 100019..100271 displayed as the sieve set."""
    text = resources.files("stirling_search").joinpath("data/reference_primes.txt").read_text()
    primes = tuple(int(s) for s in text.split() if s.isdigit())
    return PrimeSet(primes, "builtin-paper")


def first20_primes() -> PrimeSet:
    """All 20 primes in [100003, 100271]."""
    return primes_above(10**5, 20, "builtin-first20")


def resolve_prime_set(source: str) -> PrimeSet:
    if source == "builtin-paper":
        return reference_primes()
    if source == "builtin-first20":
        return first20_primes()
    return load_primes(source)


def mod_pow(base: int, exp: int, p: int) -> int:
    """base^exp mod p by left-to-right binary exponentiation; 0^0 is 1."""
    if p < 2:
        raise ValueError("modulus must be >= 2")
    if exp < 0:
        raise ValueError("negative exponent")
    base %= p
    result = 1
    for bit in bin(exp)[2:]:
        result = result * result % p
        if bit == "1":
            result = result * base % p
    return result


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) by Euler's criterion."""
    if p <= 2 or not is_prime(p):
        raise ValueError(f"Legendre symbol needs an odd prime modulus, got {p}")
    a %= p
    if a == 0:
        return 0
    r = mod_pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def legendre_table(p: int) -> np.ndarray:
    """int8 array t with t[r] = (r/p) for every residue r in [0, p).

    Built from the squares mod p, which is one vectorised pass instead of p
    modular exponentiations.
    """
    if p <= 2 or not is_prime(p):
        raise ValueError(f"need an odd prime, got {p}")
    table = np.full(p, -1, dtype=np.int8)
    r = np.arange(1, (p - 1) // 2 + 1, dtype=np.int64)
    table[(r * r) % p] = 1
    table[0] = 0
    return table


@dataclass
class FactorialResidueStream:
    """Tracks n! mod p while n advances one step at a time."""

    p: int
    n: int = 0
    residue: int = 1

    def advance(self) -> "FactorialResidueStream":
        self.n += 1
        self.residue = self.residue * self.n % self.p
        return self


def factorial_mod_advance(stream: FactorialResidueStream) -> FactorialResidueStream:
    return FactorialResidueStream(stream.p, stream.n + 1, stream.residue * (stream.n + 1) % stream.p)


def factorial_residues(p: int, n_max: int) -> np.ndarray:
    """int64 array f with f[n] = n! mod p for n = 0..n_max."""
    out = np.empty(n_max + 1, dtype=np.int64)
    r = 1
    out[0] = 1
    for n in range(1, n_max + 1):
        r = r * n % p
        out[n] = r
    return out

