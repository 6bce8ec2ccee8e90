"""Exact integer and rational helpers, and decidable comparisons against e."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction


class Order(enum.Enum):
    LESS = -1
    GREATER = 1


def factorial(m: int) -> int:
    return math.factorial(m)


def binomial(m: int, r: int) -> int:
    """C(m, r), taken to be 0 whenever r < 0, r > m or m < 0."""
    if m < 0 or r < 0 or r > m:
        return 0
    return math.comb(m, r)


def double_factorial_odd(m: int) -> int:
    """m!! for odd m, with (-1)!! = 0!! = 1."""
    if m in (-1, 0):
        return 1
    if m < 0 or m % 2 == 0:
        raise ValueError(f"double_factorial_odd expects an odd m (or 0), got {m}")
    result = 1
    for i in range(3, m + 1, 2):
        result *= i
    return result


@dataclass(frozen=True)
class EInterval:
    """Rational bracket lo < e < hi built from ``terms`` series terms."""

    lo: Fraction
    hi: Fraction
    terms: int

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def e_enclosure(terms: int) -> EInterval:
    """Partial sum of 1/i! for i = 0..terms, plus the tail bound 1/(terms!*terms)."""
    if terms < 1:
        raise ValueError("terms must be >= 1")
    # accumulate sum_{i<=terms} terms!/i! as an integer, divide once
    acc = 0
    prod = 1
    for i in range(terms, -1, -1):
        acc += prod
        prod *= i if i else 1
    f = math.factorial(terms)
    lo = Fraction(acc, f)
    return EInterval(lo, lo + Fraction(1, f * terms), terms)


def cmp_times_e(a, b, start_terms: int = 12) -> Order:
    """Exact order of a*e against b for rational a > 0 and rational b.

    a*e is irrational, so the two are never equal; the bracket is refined
    until it separates them.
    """
    a = Fraction(a)
    b = Fraction(b)
    if a <= 0:
        raise ValueError("cmp_times_e requires a > 0")
    terms = start_terms
    while True:
        enc = e_enclosure(terms)
        if a * enc.hi < b:
            return Order.LESS
        if a * enc.lo > b:
            return Order.GREATER
        terms *= 2
