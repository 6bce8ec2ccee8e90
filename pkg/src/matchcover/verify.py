"""Theorem, proof-claim and conjecture verification harnesses.

Randomized runs derive one RNG per sample from (master seed, sample index),
and samples are grouped into fixed-size shards whose results are merged in
shard order, so reports do not depend on how many workers ran them.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .bounds import Theorem, main_k_bound, pm_count, thm1_bound, thm2_bound
from .covering import (
    blocking_masks,
    exists_good_pm,
    family_blocked,
    greedy_bounded,
    member_incidence,
    saturated_family,
    scan_for_witness,
)
from .hyper import (
    HyperFamily,
    check_hyper_guard,
    conjecture_k_bound,
    hpm_table,
    hyper_edge_index,
    hyper_edge_list,
    random_hpm,
)
from .injection import _check_claim_guard, b_w_partition_check, claim_trial
from .matchings import (
    ENUMERATION_GUARD_N,
    GuardError,
    MatchingFamily,
    XMatching,
    edge_frequency,
    enumerate_pms,
    random_pm,
)

SHARD_SIZE = 25
EXHAUSTIVE_FAMILY_GUARD = 2_000_000


@dataclass
class VerificationReport:
    theorem: str
    n: int
    x: int
    threshold: int | None
    families_tested: int
    counterexamples: list = field(default_factory=list)
    mode: str = "EXHAUSTIVE"
    seed: int | None = None
    samples: int | None = None
    vacuous: bool = False
    t: int = 2
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        doc = {
            "type": "verification_report",
            "theorem": self.theorem,
            "t": self.t,
            "n": self.n,
            "x": self.x,
            "threshold": self.threshold,
            "vacuous": self.vacuous,
            "mode": self.mode,
            "families_tested": self.families_tested,
            "counterexamples": self.counterexamples,
        }
        if self.mode == "RANDOM":
            doc["seed"] = self.seed
            doc["samples"] = self.samples
        doc["details"] = self.details
        return doc


def derive_seed(master: int, *path) -> int:
    """Stable 64-bit seed for a sub-stream of ``master``."""
    key = ":".join(str(p) for p in (master,) + path).encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


def worker_count() -> int:
    raw = os.environ.get("MATCHCOVER_THREADS", "0").strip() or "0"
    try:
        requested = int(raw)
    except ValueError:
        raise ValueError(f"MATCHCOVER_THREADS must be an integer, got {raw!r}") from None
    if requested < 0:
        raise ValueError("MATCHCOVER_THREADS must be >= 0")
    return requested or (os.cpu_count() or 1)


def run_sharded(task: Callable, args: tuple, samples: int, workers: int | None = None) -> list:
    """Run ``task(*args, indices)`` over fixed shards of sample indices and
    concatenate the per-shard result lists in shard order."""
    shards = [range(i, min(i + SHARD_SIZE, samples)) for i in range(0, samples, SHARD_SIZE)]
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(shards) <= 1:
        parts = [task(*args, shard) for shard in shards]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(task, *zip(*[args + (shard,) for shard in shards])))
    return [item for part in parts for item in part]


# --- T1 / T2 / MAIN ---


def _bound_for(theorem: Theorem, n: int, x: int):
    return {Theorem.T1: thm1_bound, Theorem.T2: thm2_bound, Theorem.MAIN: main_k_bound}[theorem](n, x)


def _random_size_family_task(n, x, s, seed, indices):
    out = []
    for i in indices:
        rng = random.Random(derive_seed(seed, "family", i))
        fam = MatchingFamily(n, tuple(random_pm(n, rng) for _ in range(s)))
        out.append(_check_family(fam, x, derive_seed(seed, "search", i)))
    return out


def _saturated_task(n, x, k, seed, indices):
    out = []
    for i in indices:
        rng = random.Random(derive_seed(seed, "family", i))
        fam = saturated_family(n, k, rng)
        if edge_frequency(fam)[1] > k:
            raise AssertionError("sampled family exceeds the frequency bound")
        out.append(_check_family(fam, x, derive_seed(seed, "search", i)))
    return out


def _check_family(fam: MatchingFamily, x: int, search_seed: int) -> dict:
    """Outcome record for one family: witness found, refuted, or unresolved."""
    res = exists_good_pm(fam, x, seed=search_seed)
    rec = {"s": fam.s, "method": res.method.value, "value": res.value}
    if res.witness is None:
        rec["family"] = fam.to_json()
        rec["decisive"] = fam.n <= ENUMERATION_GUARD_N
    return rec


def _summarize(report: VerificationReport, records: list) -> VerificationReport:
    sizes = [r["s"] for r in records]
    report.families_tested = len(records)
    failures = [r for r in records if "family" in r]
    report.counterexamples = [
        {"family": r["family"], "min_max_agreement": r["value"]} for r in failures if r["decisive"]
    ]
    unresolved = [r for r in failures if not r["decisive"]]
    if unresolved:
        report.details["unresolved"] = [
            {"family": r["family"], "best_value": r["value"]} for r in unresolved
        ]
    if sizes:
        report.details["family_size_min"] = min(sizes)
        report.details["family_size_max"] = max(sizes)
        report.details["family_sizes"] = sizes
    return report


def verify_theorem(
    theorem,
    n: int,
    x: int,
    mode: str = "exhaustive",
    samples: int = 1000,
    seed: int = 0,
    override: bool = False,
    workers: int | None = None,
) -> VerificationReport:
    """Check that families allowed by a theorem's hypothesis all admit a
    perfect matching agreeing with each member in at most x-1 edges.

    T1/T2 test families of size equal to the theorem's integer threshold.
    MAIN tests families whose edge frequency is at most the main k bound,
    grown greedily until (nearly) saturated.
    """
    theorem = Theorem(theorem)
    mode = mode.lower()
    if mode not in ("exhaustive", "random"):
        raise ValueError(f"unknown mode {mode!r}")
    bound = _bound_for(theorem, n, x)
    threshold = bound.integer_threshold
    report = VerificationReport(
        theorem.value, n, x, threshold, 0, mode=mode.upper(), vacuous=bound.vacuous
    )
    if mode == "random":
        report.seed, report.samples = seed, samples

    if theorem is Theorem.MAIN:
        report.details["k"] = threshold
        if bound.vacuous:
            return report
        if mode == "exhaustive":
            raise GuardError("MAIN verification is only available in random mode")
        if n > ENUMERATION_GUARD_N and not override:
            raise GuardError(f"MAIN verification at n={n} needs override_guards")
        records = run_sharded(_saturated_task, (n, x, threshold, seed), samples, workers)
        return _summarize(report, records)

    s = threshold
    if s < 1:
        return report
    if mode == "random":
        records = run_sharded(_random_size_family_task, (n, x, s, seed), samples, workers)
        return _summarize(report, records)

    total = pm_count(n)
    if n > ENUMERATION_GUARD_N or math.comb(total, s) > EXHAUSTIVE_FAMILY_GUARD:
        if not override:
            raise GuardError(f"C({total}, {s}) families exceed the exhaustive guard; needs override_guards")
    masks = blocking_masks(n, x, override)
    pms = list(enumerate_pms(n, override))
    tested = 0
    for combo in itertools.combinations(range(total), s):
        tested += 1
        fam_mask = 0
        for j in combo:
            fam_mask |= 1 << j
        if family_blocked(fam_mask, masks):
            fam = MatchingFamily(n, tuple(pms[j] for j in combo))
            report.counterexamples.append({"family": fam.to_json()})
    report.families_tested = tested
    return report


# --- proof-claim checks ---


def _claim_task(n, x, seed, indices):
    out = []
    for i in indices:
        trial = claim_trial(n, x, random.Random(derive_seed(seed, "claim", i)))
        out.append(
            {
                "X": [list(e) for e in trial.X.edges],
                "avoided": [[list(e) for e in xp.edges] for xp in trial.avoided],
                "a_e": trial.a_count,
                "violations": trial.violations,
                "collisions": trial.collisions,
                "escapes": trial.escapes,
            }
        )
    return out


def verify_counting_claim(
    n: int,
    x: int,
    trials: int = 100,
    seed: int = 0,
    override: bool = False,
    workers: int | None = None,
) -> VerificationReport:
    """Randomized check of |B_W ∩ E| >= |A_X ∩ E| over every pattern W, with
    gamma_map injective from A_X ∩ E into B_W ∩ E."""
    if not 1 <= x <= n:
        raise ValueError(f"need 1 <= x <= n, got n={n}, x={x}")
    _check_claim_guard(n, override)
    records = run_sharded(_claim_task, (n, x, seed), trials, workers)
    report = VerificationReport("CLAIM", n, x, None, len(records), mode="RANDOM", seed=seed, samples=trials)
    report.counterexamples = [r for r in records if r["violations"] or r["collisions"] or r["escapes"]]
    report.details = {
        "violations": sum(len(r["violations"]) for r in records),
        "injectivity_collisions": sum(len(r["collisions"]) for r in records),
        "escapes": sum(len(r["escapes"]) for r in records),
    }
    return report


def verify_partition(n: int, x: int, override: bool = False) -> VerificationReport:
    """b_w_partition_check for every x-submatching of every perfect matching."""
    _check_claim_guard(n, override)
    seen: set[XMatching] = set()
    report = VerificationReport("PARTITION", n, x, None, 0)
    for m in enumerate_pms(n):
        for combo in itertools.combinations(m.edges, x):
            X = XMatching(combo)
            if X in seen:
                continue
            seen.add(X)
            if not b_w_partition_check(n, x, X, override):
                report.counterexamples.append({"X": [list(e) for e in X.edges]})
    report.families_tested = len(seen)
    return report


# --- hypergraph conjecture ---


def _conjecture_task(t, n, x, k, seed, indices, patience=1000):
    table = hpm_table(t, n)
    idx = hyper_edge_index(t, n)
    n_edges = len(hyper_edge_list(t, n))
    cap = k * math.comb(t * n - 1, t - 1)
    out = []
    for i in indices:
        rng = random.Random(derive_seed(seed, "hyperfamily", i))
        members, _ = greedy_bounded(
            lambda r: random_hpm(t, n, r), lambda m: m.edges, k, rng, cap, patience=patience
        )
        inc = member_incidence([[idx[e] for e in m.edges] for m in members], n_edges)
        row, value, _ = scan_for_witness(table, inc, x - 1)
        rec = {"s": len(members), "value": value}
        if value > x - 1:
            rec["family"] = HyperFamily(t, n, tuple(members)).to_json()
        out.append(rec)
    return out


def verify_conjecture(
    t: int,
    n: int,
    x: int,
    samples: int = 1000,
    seed: int = 0,
    override: bool = False,
    workers: int | None = None,
) -> VerificationReport:
    """Sample hyper-families with edge frequency <= the conjectured k bound and
    search all perfect t-matchings for one agreeing with every member in at
    most x-1 edges."""
    bound = conjecture_k_bound(t, n, x)
    k = bound.integer_threshold
    report = VerificationReport(
        "CONJECTURE", n, x, k, 0, mode="RANDOM", seed=seed, samples=samples, vacuous=bound.vacuous, t=t
    )
    report.details["k"] = k
    if bound.vacuous:
        return report
    check_hyper_guard(t, n, override)
    records = run_sharded(_conjecture_task, (t, n, x, k, seed), samples, workers)
    report.families_tested = len(records)
    report.counterexamples = [
        {"family": r["family"], "min_max_agreement": r["value"]} for r in records if "family" in r
    ]
    sizes = [r["s"] for r in records]
    if sizes:
        report.details["family_size_min"] = min(sizes)
        report.details["family_size_max"] = max(sizes)
        report.details["family_sizes"] = sizes
    return report
