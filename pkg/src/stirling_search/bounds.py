"""Lambert W and the explicit multiplicity bound 2 + 2 log a / W(log(a) / 2).

Logarithms are natural throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

MAX_HALLEY_STEPS = 50


def lambert_w0(x: float) -> float:
    """Principal branch W(x) for x >= 0, by Halley iteration."""
    x = float(x)
    if not x >= 0.0:
        raise ValueError(f"lambert_w0 is only implemented for x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return math.inf
    w = math.log1p(x) if x < math.e else math.log(x) - math.log(math.log(x))
    for _ in range(MAX_HALLEY_STEPS):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= step
        if abs(step) < 1e-15 * (1.0 + abs(w)):
            break
    return w


def log_natural(a: int) -> float:
    # math.log splits big ints into mantissa and exponent itself, so it is
    # accurate far past the float range
    if a <= 0:
        raise ValueError(f"log of non-positive {a}")
    return math.log(a)


@dataclass(frozen=True)
class BoundEvaluation:
    a: int
    log_a: float
    w_value: float
    b_limit: float
    bound: float

    def certifies(self, count: int) -> bool:
        return count <= self.bound


def singmaster_bound(a: int) -> BoundEvaluation:
    """Upper bound valid for the multiplicity of a >= 2 in either triangle."""
    if a < 2:
        raise ValueError(f"bound needs a >= 2, got {a}")
    log_a = log_natural(a)
    w = lambert_w0(0.5 * log_a)
    b_limit = 1.0 + log_a / w
    return BoundEvaluation(a, log_a, w, b_limit, 2.0 * b_limit)


ASYMPTOTIC_MIN_A = 16


def asymptotic_comparator(a: int) -> float:
    """log a / (log log a - log log log a), the growth order of the bound."""
    if a < ASYMPTOTIC_MIN_A:
        raise ValueError(f"asymptotic comparator is reported for a >= {ASYMPTOTIC_MIN_A}, got {a}")
    l1 = log_natural(a) if isinstance(a, int) else math.log(a)
    l2 = math.log(l1)
    denom = l2 - math.log(l2)
    if denom <= 0:
        raise ValueError(f"non-positive denominator at a={a}")
    return l1 / denom


def half_power_lower_bound_holds(m: int, value: int) -> bool:
    """Exact test of value >= (m/2)^m, i.e. value * 2^m >= m^m."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return Fraction(value) >= Fraction(m, 2) ** m
