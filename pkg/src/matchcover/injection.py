"""Executable versions of the counting steps behind the local-lemma bound.

For an x-matching X with support V (its 2x vertices), every perfect matching
M induces a pattern on V: the edges of M inside V (doubletons) and the
remaining vertices of V, which M matches outside V (singletons). The event
B_W is "M induces pattern W"; these events partition all perfect matchings.
``gamma_map`` sends a matching containing X to one inducing W, and the
verifier checks that it is injective and preserves the conditioning event.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .bounds import pm_count, w_count
from .hyper import block_partitions
from .matchings import (
    Edge,
    GuardError,
    MatchingError,
    PerfectMatching,
    XMatching,
    enumerate_pms,
)

CLAIM_GUARD_N = 5


@dataclass(frozen=True, order=True)
class WPattern:
    singletons: tuple[int, ...]
    doubletons: tuple[Edge, ...]

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.singletons + tuple(v for e in self.doubletons for v in e)))

    @property
    def blocks(self) -> int:
        return len(self.singletons) + len(self.doubletons)


def w_patterns(X: XMatching, n: int) -> list[WPattern]:
    """Every singleton/doubleton split of X's support using at most n blocks."""
    out = []
    for partition in block_partitions(X.vertices, 2):
        if len(partition) > n:
            continue
        singles = tuple(sorted(b[0] for b in partition if len(b) == 1))
        doubles = tuple(sorted(b for b in partition if len(b) == 2))
        out.append(WPattern(singles, doubles))
    return sorted(out)


def pattern_of(m: PerfectMatching, support) -> WPattern:
    """The pattern M induces on ``support``."""
    v = set(support)
    doubles = tuple(e for e in m.edges if e[0] in v and e[1] in v)
    inside = {u for e in doubles for u in e}
    return WPattern(tuple(sorted(v - inside)), doubles)


def in_b_w(m: PerfectMatching, w: WPattern) -> bool:
    return pattern_of(m, w.support) == w


def contains(m: PerfectMatching, X: XMatching) -> bool:
    edges = set(m.edges)
    return all(e in edges for e in X.edges)


def tau_normalize(m: PerfectMatching, X: XMatching) -> tuple[Edge, ...]:
    """Edges of M outside X, each directed small-to-large, ordered by tail."""
    if not contains(m, X):
        raise MatchingError(f"{X.edges} is not contained in {m.edges}")
    rest = set(m.edges) - set(X.edges)
    return tuple(sorted((min(e), max(e)) for e in rest))


def gamma_map(m: PerfectMatching, X: XMatching, w: WPattern) -> PerfectMatching:
    """Re-pair the first 2p vertices of the flattened tau string with W's
    singletons (k-th string vertex to k-th singleton); the rest of the string
    folds back into its original edges."""
    if w.support != X.vertices:
        raise MatchingError(f"pattern support {w.support} differs from X's support {X.vertices}")
    string = [v for e in tau_normalize(m, X) for v in e]
    p2 = len(w.singletons)
    if p2 % 2 or p2 > len(string):
        raise MatchingError(f"pattern with {p2} singletons cannot be realised for n={m.n}")
    gamma0 = [tuple(sorted((s, v))) for s, v in zip(w.singletons, string[:p2])]
    tail = string[p2:]
    gamma1 = [(tail[i], tail[i + 1]) for i in range(0, len(tail), 2)]
    return PerfectMatching(m.n, tuple(sorted(list(w.doubletons) + gamma0 + gamma1)))


@lru_cache(maxsize=4)
def _all_pms(n: int) -> tuple[PerfectMatching, ...]:
    return tuple(enumerate_pms(n))


def _check_claim_guard(n: int, override: bool) -> None:
    if n > CLAIM_GUARD_N and not override:
        raise GuardError(f"claim verification at n={n} needs override_guards")


def b_w_partition_counts(n: int, X: XMatching, override: bool = False) -> dict[WPattern, int]:
    """|B_W| for every valid pattern W on X's support (zero counts included)."""
    _check_claim_guard(n, override)
    counts = {w: 0 for w in w_patterns(X, n)}
    for m in _all_pms(n):
        w = pattern_of(m, X.vertices)
        if w not in counts:
            raise AssertionError(f"{m.edges} induces {w}, which is not a valid pattern")
        counts[w] += 1
    return counts


def b_w_partition_check(n: int, x: int, X: XMatching, override: bool = False) -> bool:
    """Every perfect matching lies in exactly one B_W, the B_W sizes sum to
    pm_count(n), and the number of patterns is w_count(n, x)."""
    _check_claim_guard(n, override)
    if X.x != x:
        raise ValueError(f"X has {X.x} edges, expected {x}")
    patterns = w_patterns(X, n)
    if len(patterns) != w_count(n, x) or len(set(patterns)) != len(patterns):
        return False
    # patterns are distinct and B_W membership is pattern equality, so a
    # matching lies in exactly one B_W iff its induced pattern is listed
    listed = set(patterns)
    counts = dict.fromkeys(patterns, 0)
    for m in _all_pms(n):
        w = pattern_of(m, X.vertices)
        if w not in listed:
            return False
        counts[w] += 1
    return sum(counts.values()) == pm_count(n) and all(c > 0 for c in counts.values())


def random_x_matching(vertices, x: int, rng: random.Random) -> XMatching:
    chosen = rng.sample(sorted(vertices), 2 * x)
    return XMatching.of(zip(chosen[0::2], chosen[1::2]))


@dataclass
class ClaimTrial:
    X: XMatching
    avoided: tuple[XMatching, ...]
    a_count: int
    violations: list
    collisions: list
    escapes: list


def claim_trial(n: int, x: int, rng: random.Random, max_avoided: int = 4) -> ClaimTrial:
    """One randomized instance of |B_W ∩ E| >= |A_X ∩ E| for all W, plus
    injectivity of gamma_map into B_W ∩ E."""
    pms = _all_pms(n)
    base = rng.choice(pms)
    X = XMatching(tuple(sorted(rng.sample(base.edges, x))))
    outside = sorted(set(range(1, 2 * n + 1)) - set(X.vertices))
    avoided: list[XMatching] = []
    if len(outside) >= 2 * x:
        for _ in range(rng.randint(0, max_avoided)):
            avoided.append(random_x_matching(outside, x, rng))
    in_e = [m for m in pms if not any(contains(m, xp) for xp in avoided)]
    a_e = [m for m in in_e if contains(m, X)]
    b_e = Counter(pattern_of(m, X.vertices) for m in in_e)
    e_set = set(in_e)
    violations, collisions, escapes = [], [], []
    for w in w_patterns(X, n):
        if b_e[w] < len(a_e):
            violations.append({"pattern": _pattern_json(w), "b_w_e": b_e[w], "a_e": len(a_e)})
        images = {}
        for m in a_e:
            g = gamma_map(m, X, w)
            if g in images:
                collisions.append({"pattern": _pattern_json(w), "preimages": [images[g].to_list(), m.to_list()]})
            images[g] = m
            if g not in e_set or not in_b_w(g, w):
                escapes.append({"pattern": _pattern_json(w), "source": m.to_list(), "image": g.to_list()})
    return ClaimTrial(X, tuple(avoided), len(a_e), violations, collisions, escapes)


def _pattern_json(w: WPattern) -> dict:
    return {"singletons": list(w.singletons), "doubletons": [list(e) for e in w.doubletons]}
