"""Closed-form covering thresholds for perfect matchings of K_2n.

Three thresholds are computed:

* ``thm1_bound``: the crude union bound over good vertex sets (``s <= bound``).
* ``thm2_bound``: the union bound over x-submatchings (``s < bound``).
* ``main_k_bound``: the largest edge frequency k for which the symmetric
  local-lemma condition ``e * p * (d + 1) <= 1`` holds.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import Order, binomial, cmp_times_e, double_factorial_odd, e_enclosure, factorial


class Theorem(str, enum.Enum):
    T1 = "T1"
    T2 = "T2"
    MAIN = "MAIN"


@dataclass(frozen=True)
class BoundReport:
    """One computed threshold.

    ``exact_value`` is the rational bound for T1/T2. The MAIN threshold
    involves e and is irrational, so ``exact_value`` is None there and
    ``enclosure`` holds a rational bracket (lo, hi) around it instead.
    ``strict_threshold`` is the largest integer strictly below the bound,
    which differs from ``integer_threshold`` only for T1 at integral bounds.
    """

    n: int
    x: int
    theorem: Theorem
    exact_value: Fraction | None
    integer_threshold: int
    vacuous: bool
    enclosure: tuple[Fraction, Fraction] | None = None
    t: int = 2
    strict_threshold: int | None = None


def _check_range(n: int, x: int) -> None:
    if not 1 <= x <= n:
        raise ValueError(f"need 1 <= x <= n, got n={n}, x={x}")


def pm_count(n: int) -> int:
    """Number of perfect matchings of K_2n, (2n)!/(2^n n!)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return factorial(2 * n) // (2**n * factorial(n))


def agreement_probability(n: int, x: int) -> Fraction:
    """Probability that a uniform perfect matching of K_2n contains x fixed disjoint edges."""
    if not 0 <= x <= n:
        raise ValueError(f"need 0 <= x <= n, got n={n}, x={x}")
    return Fraction(double_factorial_odd(2 * (n - x) - 1), double_factorial_odd(2 * n - 1))


def _largest_below(value: Fraction) -> int:
    """Largest integer strictly below ``value``."""
    return math.ceil(value) - 1


def thm1_bound(n: int, x: int) -> BoundReport:
    _check_range(n, x)
    value = Fraction(factorial(x) * binomial(2 * n - x, x), binomial(n, x))
    threshold = math.floor(value)
    return BoundReport(
        n, x, Theorem.T1, value, threshold, threshold < 1, strict_threshold=_largest_below(value)
    )


def thm2_bound(n: int, x: int) -> BoundReport:
    _check_range(n, x)
    value = Fraction(factorial(x), 2**x) * Fraction(
        binomial(2 * n, x) * binomial(2 * n - x, x), binomial(n, x) ** 2
    )
    threshold = _largest_below(value)
    return BoundReport(n, x, Theorem.T2, value, threshold, threshold < 1, strict_threshold=threshold)


def w_count(n: int, x: int) -> int:
    """Number of singleton/doubleton patterns on the 2x support vertices of an
    x-matching that use at most n blocks."""
    _check_range(n, x)
    total = 0
    for j in range(max(0, 2 * x - n), x + 1):
        total += binomial(2 * x, 2 * j) * double_factorial_odd(2 * j - 1)
    return total


def dependency_unit(n: int, x: int) -> int:
    """d per unit of frequency: 2x(2n-1)C(n-1, x-1)."""
    return 2 * x * (2 * n - 1) * binomial(n - 1, x - 1)


def lll_params(n: int, x: int, k: int) -> tuple[int, Fraction]:
    _check_range(n, x)
    if k < 0:
        raise ValueError("k must be >= 0")
    return k * dependency_unit(n, x), Fraction(1, w_count(n, x))


def symmetric_lll_holds(p: Fraction, d: int) -> bool:
    """Decide e * p * (d + 1) <= 1 exactly."""
    return cmp_times_e(p * (d + 1), 1) is Order.LESS


def lll_condition_holds(n: int, x: int, k: int) -> bool:
    d, p = lll_params(n, x, k)
    return symmetric_lll_holds(p, d)


def largest_frequency(total: int, unit: int) -> tuple[int, bool]:
    """Largest k >= 0 with e*(k*unit + 1) <= total, and whether any k qualifies.

    The condition is monotone in k, so we start from a rational estimate and
    step until the condition flips.
    """
    enc = e_enclosure(20)
    # real threshold (total/e - 1)/unit lies in [total/hi - 1, total/lo - 1]/unit
    k = max(0, math.floor((Fraction(total) / enc.hi - 1) / unit))

    def holds(k: int) -> bool:
        return cmp_times_e(k * unit + 1, total) is Order.LESS

    if not holds(0):
        return 0, False
    while k > 0 and not holds(k):
        k -= 1
    while holds(k + 1):
        k += 1
    return k, True


def _k_enclosure(total: int, unit: int, terms: int = 30) -> tuple[Fraction, Fraction]:
    enc = e_enclosure(terms)
    lo = (Fraction(total) / enc.hi - 1) / unit
    hi = (Fraction(total) / enc.lo - 1) / unit
    return lo, hi


def main_k_bound(n: int, x: int) -> BoundReport:
    _check_range(n, x)
    total = w_count(n, x)
    unit = dependency_unit(n, x)
    k, _ = largest_frequency(total, unit)
    return BoundReport(n, x, Theorem.MAIN, None, k, k == 0, _k_enclosure(total, unit))
