import itertools
import random
from collections import Counter

import pytest

from matchcover.bounds import w_count
from matchcover.injection import (
    WPattern,
    b_w_partition_check,
    b_w_partition_counts,
    claim_trial,
    gamma_map,
    in_b_w,
    pattern_of,
    tau_normalize,
    w_patterns,
)
from matchcover.matchings import MatchingError, XMatching, canonicalize, enumerate_pms, random_pm


def pm(*pairs):
    return canonicalize(pairs, len(pairs))


def test_tau_examples():
    m = pm((1, 5), (2, 6), (3, 7), (4, 8))
    assert tau_normalize(m, XMatching.of([(1, 5), (2, 6)])) == ((3, 7), (4, 8))
    m = pm((1, 2), (3, 4), (5, 6))
    assert tau_normalize(m, XMatching.of([(1, 2)])) == ((3, 4), (5, 6))
    assert tau_normalize(m, XMatching(m.edges)) == ()
    with pytest.raises(MatchingError):
        tau_normalize(m, XMatching.of([(1, 3)]))


def test_tau_injective_on_matchings_sharing_x():
    X = XMatching.of([(1, 2)])
    images = [tau_normalize(m, X) for m in enumerate_pms(4) if (1, 2) in m.edges]
    assert len(images) == len(set(images)) == 15


def test_gamma_hand_example():
    m = pm((1, 2), (3, 4), (5, 6))
    w = WPattern((1, 2), ())
    assert gamma_map(m, XMatching.of([(1, 2)]), w) == pm((1, 3), (2, 4), (5, 6))


def test_gamma_identity_case():
    rng = random.Random(0)
    for _ in range(200):
        n = rng.randint(1, 7)
        m = random_pm(n, rng)
        X = XMatching(tuple(sorted(rng.sample(m.edges, rng.randint(0, n)))))
        assert gamma_map(m, X, WPattern((), X.edges)) == m


def test_gamma_rejects_wrong_support():
    m = pm((1, 2), (3, 4), (5, 6))
    with pytest.raises(MatchingError):
        gamma_map(m, XMatching.of([(1, 2)]), WPattern((3, 4), ()))


def test_gamma_lands_in_b_w():
    X = XMatching.of([(1, 2), (3, 4)])
    for m in enumerate_pms(4):
        if not {(1, 2), (3, 4)} <= set(m.edges):
            continue
        for w in w_patterns(X, 4):
            g = gamma_map(m, X, w)
            assert in_b_w(g, w)
            assert set(w.doubletons) <= set(g.edges)


def test_w_patterns_count_and_shape():
    for n in range(1, 7):
        for x in range(1, n + 1):
            X = XMatching(tuple((2 * i + 1, 2 * i + 2) for i in range(x)))
            pats = w_patterns(X, n)
            assert len(pats) == len(set(pats)) == w_count(n, x)
            for w in pats:
                assert w.support == X.vertices
                assert len(w.singletons) % 2 == 0
                assert w.blocks <= n


def test_partition_k4():
    X = XMatching.of([(1, 2)])
    counts = b_w_partition_counts(2, X)
    assert counts == {WPattern((), ((1, 2),)): 1, WPattern((1, 2), ()): 2}
    assert b_w_partition_check(2, 1, X)


def test_partition_k6():
    X = XMatching.of([(1, 2), (3, 4)])
    counts = b_w_partition_counts(3, X)
    assert len(counts) == 9 and sum(counts.values()) == 15
    assert b_w_partition_check(3, 2, X)


def test_partition_check_rejects_wrong_x():
    with pytest.raises(ValueError):
        b_w_partition_check(3, 1, XMatching.of([(1, 2), (3, 4)]))


def test_pattern_of_example():
    m = pm((1, 2), (3, 4), (5, 6))
    assert pattern_of(m, (1, 2, 3, 6)) == WPattern((3, 6), ((1, 2),))


def test_claim_trial_empty_avoid_set_identity_pattern():
    # with nothing avoided, |B_W| >= |A_X| must hold for every pattern
    n = 4
    X = XMatching.of([(1, 2), (3, 4), (5, 6)])
    pms = list(enumerate_pms(n))
    a = sum(1 for m in pms if set(X.edges) <= set(m.edges))
    b = Counter(pattern_of(m, X.vertices) for m in pms)
    assert all(b[w] >= a for w in w_patterns(X, n))


@pytest.mark.parametrize("n,x", [(3, 1), (3, 2), (4, 2), (5, 2)])
def test_claim_trials_clean(n, x):
    rng = random.Random(n * 10 + x)
    for _ in range(20):
        trial = claim_trial(n, x, rng)
        assert not trial.violations and not trial.collisions and not trial.escapes
        for xp in trial.avoided:
            assert not set(xp.vertices) & set(trial.X.vertices)


def test_gamma_injective_exhaustive_n4():
    for x in range(1, 5):
        for X in {XMatching(c) for m in enumerate_pms(4) for c in itertools.combinations(m.edges, x)}:
            sources = [m for m in enumerate_pms(4) if set(X.edges) <= set(m.edges)]
            for w in w_patterns(X, 4):
                images = [gamma_map(m, X, w) for m in sources]
                assert len(set(images)) == len(images)
