from fractions import Fraction

import mpmath
import pytest

from matchcover.bounds import (
    Theorem,
    agreement_probability,
    lll_condition_holds,
    lll_params,
    main_k_bound,
    pm_count,
    thm1_bound,
    thm2_bound,
    w_count,
)
from matchcover.exact import binomial, factorial
from matchcover.matchings import enumerate_pms


def brute_patterns(n, x):
    """Singleton/doubleton splits of 2x labeled vertices with <= n blocks."""

    def splits(vs):
        if not vs:
            yield 0
            return
        rest = vs[1:]
        yield from (b + 1 for b in splits(rest))
        for i in range(len(rest)):
            yield from (b + 1 for b in splits(rest[:i] + rest[i + 1 :]))

    return sum(1 for blocks in splits(tuple(range(2 * x))) if blocks <= n)


def k_bound_oracle(n, x):
    mpmath.mp.dps = 80
    unit = 2 * x * (2 * n - 1) * binomial(n - 1, x - 1)
    return int(mpmath.floor((w_count(n, x) - mpmath.e) / (mpmath.e * unit)))


@pytest.mark.parametrize("n,expected", [(0, 1), (2, 3), (5, 945), (6, 10395)])
def test_pm_count(n, expected):
    assert pm_count(n) == expected


def test_pm_count_matches_enumeration():
    for n in range(1, 7):
        assert pm_count(n) == sum(1 for _ in enumerate_pms(n))


@pytest.mark.parametrize("n,x,expected", [(2, 1, Fraction(1, 3)), (3, 2, Fraction(1, 15)), (4, 0, Fraction(1))])
def test_agreement_probability(n, x, expected):
    assert agreement_probability(n, x) == expected


def test_agreement_probability_by_enumeration():
    for n in range(1, 6):
        pms = list(enumerate_pms(n))
        for x in range(n + 1):
            fixed = {(2 * i + 1, 2 * i + 2) for i in range(x)}
            hits = sum(1 for m in pms if fixed <= set(m.edges))
            assert agreement_probability(n, x) == Fraction(hits, len(pms))


def test_agreement_probability_range():
    with pytest.raises(ValueError):
        agreement_probability(3, 4)


def test_thm1_examples():
    r = thm1_bound(2, 1)
    assert (r.exact_value, r.integer_threshold, r.theorem) == (Fraction(3, 2), 1, Theorem.T1)
    assert thm1_bound(3, 2).exact_value == 4 and thm1_bound(3, 2).integer_threshold == 4
    for n in range(1, 9):
        assert thm1_bound(n, n).exact_value == factorial(n)


def test_thm2_examples():
    r = thm2_bound(3, 2)
    assert (r.exact_value, r.integer_threshold) == (5, 4)
    r = thm2_bound(2, 1)
    assert (r.exact_value, r.integer_threshold) == (Fraction(3, 2), 1)


@pytest.mark.parametrize("fn", [thm1_bound, thm2_bound, main_k_bound, w_count])
def test_range_checks(fn):
    for n, x in [(3, 0), (3, 4)]:
        with pytest.raises(ValueError):
            fn(n, x)


def test_union_bound_identities():
    for n in range(1, 41):
        for x in range(1, n + 1):
            p = agreement_probability(n, x)
            assert thm1_bound(n, x).exact_value * binomial(2 * n, x) * Fraction(1, 2**x) * p == 1
            assert thm2_bound(n, x).exact_value * binomial(n, x) * p == 1


def test_x1_thresholds_at_least_one():
    for n in range(2, 40):
        assert thm1_bound(n, 1).integer_threshold >= 1
        assert thm2_bound(n, 1).integer_threshold >= 1


@pytest.mark.parametrize("n,x,expected", [(3, 2, 9), (2, 1, 2), (7, 1, 2), (5, 5, 945)])
def test_w_count_examples(n, x, expected):
    assert w_count(n, x) == expected


def test_w_count_brute_force():
    for n in range(1, 11):
        for x in range(1, min(n, 5) + 1):
            assert w_count(n, x) == brute_patterns(n, x)


def test_w_count_full():
    for n in range(1, 11):
        assert w_count(n, n) == pm_count(n)


def test_lll_params():
    assert lll_params(3, 2, 1) == (40, Fraction(1, 9))
    assert lll_params(5, 5, 3) == (270, Fraction(1, 945))
    assert lll_params(4, 2, 0)[0] == 0


@pytest.mark.parametrize("n,x,k,expected", [(3, 2, 0, True), (3, 2, 1, False), (5, 5, 3, True), (5, 5, 4, False)])
def test_lll_condition(n, x, k, expected):
    assert lll_condition_holds(n, x, k) is expected


@pytest.mark.parametrize("n,x,expected,vacuous", [(5, 5, 3, False), (6, 5, 3, False), (3, 2, 0, True)])
def test_main_k_bound_examples(n, x, expected, vacuous):
    r = main_k_bound(n, x)
    assert (r.integer_threshold, r.vacuous) == (expected, vacuous)
    lo, hi = r.enclosure
    assert lo <= hi


def test_main_k_bound_matches_high_precision_oracle():
    for n in range(1, 16):
        for x in range(1, n + 1):
            k = main_k_bound(n, x).integer_threshold
            assert k == max(0, k_bound_oracle(n, x))
            if lll_condition_holds(n, x, 0):
                assert lll_condition_holds(n, x, k)
            assert not lll_condition_holds(n, x, k + 1)
