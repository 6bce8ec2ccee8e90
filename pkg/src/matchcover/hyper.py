"""Perfect matchings of the complete t-uniform hypergraph on tn vertices, and
the pattern counts behind the hypergraph frequency bound."""

from __future__ import annotations

import itertools
import json
import random
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .bounds import BoundReport, Theorem, _k_enclosure, largest_frequency
from .exact import binomial, factorial
from .matchings import GuardError, MatchingError

HyperEdge = tuple[int, ...]
CompositionVector = tuple[int, ...]

HYPER_ENUMERATION_GUARD = 10**7


@dataclass(frozen=True, order=True)
class HyperMatching:
    t: int
    n: int
    edges: tuple[HyperEdge, ...]

    def __iter__(self) -> Iterator[HyperEdge]:
        return iter(self.edges)

    def to_list(self) -> list[list[int]]:
        return [list(e) for e in self.edges]


def hyper_canonicalize(blocks: Iterable[Sequence[int]], t: int, n: int) -> HyperMatching:
    edges = []
    seen: set[int] = set()
    for block in blocks:
        edge = tuple(sorted(int(v) for v in block))
        if len(edge) != t or len(set(edge)) != t:
            raise MatchingError(f"hyperedge {list(block)} does not have {t} distinct vertices")
        for v in edge:
            if not 1 <= v <= t * n:
                raise MatchingError(f"vertex {v} outside 1..{t * n}")
            if v in seen:
                raise MatchingError(f"vertex {v} repeated")
            seen.add(v)
        edges.append(edge)
    if len(edges) != n:
        raise MatchingError(f"expected {n} hyperedges, got {len(edges)}")
    return HyperMatching(t, n, tuple(sorted(edges)))


def hyper_pm_count(t: int, n: int) -> int:
    """(tn)! / ((t!)^n n!)."""
    if t < 1 or n < 0:
        raise ValueError("need t >= 1 and n >= 0")
    return factorial(t * n) // (factorial(t) ** n * factorial(n))


def check_hyper_guard(t: int, n: int, override: bool = False) -> None:
    if hyper_pm_count(t, n) > HYPER_ENUMERATION_GUARD and not override:
        raise GuardError(
            f"{hyper_pm_count(t, n)} hypermatchings for t={t}, n={n} exceeds the "
            f"enumeration guard; needs override_guards"
        )


def _groupings(vertices: tuple[int, ...], t: int) -> Iterator[tuple[HyperEdge, ...]]:
    if not vertices:
        yield ()
        return
    first, rest = vertices[0], vertices[1:]
    for others in itertools.combinations(range(len(rest)), t - 1):
        edge = (first,) + tuple(rest[i] for i in others)
        chosen = set(others)
        remaining = tuple(v for i, v in enumerate(rest) if i not in chosen)
        for tail in _groupings(remaining, t):
            yield (edge,) + tail


def enumerate_hpms(t: int, n: int, override: bool = False) -> Iterator[HyperMatching]:
    """Every perfect t-matching on tn vertices, lexicographic."""
    if t < 1 or n < 1:
        raise ValueError("need t >= 1 and n >= 1")
    check_hyper_guard(t, n, override)
    for edges in _groupings(tuple(range(1, t * n + 1)), t):
        yield HyperMatching(t, n, edges)


def random_hpm(t: int, n: int, rng: random.Random) -> HyperMatching:
    """Uniform perfect t-matching: group the smallest free vertex with a
    uniformly random (t-1)-subset of the other free vertices."""
    free = list(range(1, t * n + 1))
    edges = []
    while free:
        first = free.pop(0)
        picked = sorted(rng.sample(range(len(free)), t - 1), reverse=True)
        others = [free.pop(i) for i in picked]
        edges.append(tuple(sorted([first] + others)))
    return HyperMatching(t, n, tuple(edges))


def hyper_agreement(m1: HyperMatching, m2: HyperMatching) -> int:
    if (m1.t, m1.n) != (m2.t, m2.n):
        raise MatchingError(f"shape mismatch: (t={m1.t}, n={m1.n}) vs (t={m2.t}, n={m2.n})")
    return len(set(m1.edges) & set(m2.edges))


def composition_vectors(t: int, n: int, x: int) -> list[CompositionVector]:
    """All (a_1..a_t) >= 0 with sum(i*a_i) = t*x and sum(a_i) <= n, lexicographic."""
    if not 1 <= x <= n:
        raise ValueError(f"need 1 <= x <= n, got n={n}, x={x}")
    out: list[CompositionVector] = []

    def extend(prefix: list[int], weight: int, blocks: int) -> None:
        i = len(prefix) + 1
        if i > t:
            if weight == t * x:
                out.append(tuple(prefix))
            return
        a = 0
        while weight + i * a <= t * x and blocks + a <= n:
            extend(prefix + [a], weight + i * a, blocks + a)
            a += 1

    extend([], 0, 0)
    return out


def block_partition_count(v: Sequence[int], t: int, x: int) -> int:
    """Ways to split tx labeled vertices into a_i blocks of size i."""
    if len(v) != t or any(a < 0 for a in v) or sum((i + 1) * a for i, a in enumerate(v)) != t * x:
        raise ValueError(f"{tuple(v)} is not a composition vector for t={t}, x={x}")
    denom = 1
    for i, a in enumerate(v, start=1):
        denom *= factorial(i) ** a * factorial(a)
    return factorial(t * x) // denom


def N_value(t: int, n: int, x: int) -> int:
    return sum(block_partition_count(v, t, x) for v in composition_vectors(t, n, x))


def block_partitions(elements: Sequence[int], max_size: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Every set partition of ``elements`` into blocks of size <= max_size."""
    elements = tuple(elements)
    if not elements:
        yield ()
        return
    first, rest = elements[0], elements[1:]
    for size in range(min(max_size, len(elements))):
        for others in itertools.combinations(range(len(rest)), size):
            block = (first,) + tuple(rest[i] for i in others)
            chosen = set(others)
            remaining = tuple(v for i, v in enumerate(rest) if i not in chosen)
            for tail in block_partitions(remaining, max_size):
                yield (block,) + tail


def hyper_dependency_unit(t: int, n: int, x: int) -> int:
    """d per unit of frequency: t*x*C(tn-1, t-1)*C(n-1, x-1)."""
    return t * x * binomial(t * n - 1, t - 1) * binomial(n - 1, x - 1)


def conjecture_k_bound(t: int, n: int, x: int) -> BoundReport:
    if t < 2:
        raise ValueError("t must be >= 2")
    if not 1 <= x <= n:
        raise ValueError(f"need 1 <= x <= n, got n={n}, x={x}")
    total = N_value(t, n, x)
    unit = hyper_dependency_unit(t, n, x)
    k, _ = largest_frequency(total, unit)
    return BoundReport(n, x, Theorem.MAIN, None, k, k == 0, _k_enclosure(total, unit), t=t)


@dataclass(frozen=True)
class HyperFamily:
    t: int
    n: int
    members: tuple[HyperMatching, ...] = ()

    @property
    def s(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[HyperMatching]:
        return iter(self.members)

    def to_json(self) -> dict:
        return {
            "type": "hyper_family",
            "t": self.t,
            "n": self.n,
            "matchings": [m.to_list() for m in self.members],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "HyperFamily":
        if not isinstance(doc, dict) or doc.get("type") != "hyper_family":
            raise MatchingError('expected a document with "type": "hyper_family"')
        t, n = doc.get("t"), doc.get("n")
        if not isinstance(t, int) or not isinstance(n, int) or t < 1 or n < 1:
            raise MatchingError(f"bad shape t={t!r}, n={n!r}")
        members = []
        for i, blocks in enumerate(doc.get("matchings", [])):
            try:
                members.append(hyper_canonicalize(blocks, t, n))
            except (MatchingError, TypeError) as exc:
                raise MatchingError(f"matching #{i}: {exc}") from exc
        return cls(t, n, tuple(members))


def load_hyper_family(path) -> HyperFamily:
    with open(path) as fh:
        return HyperFamily.from_json(json.load(fh))


def hyper_edge_frequency(family: HyperFamily) -> tuple[dict[HyperEdge, int], int]:
    counts = Counter(e for m in family.members for e in m.edges)
    return dict(counts), max(counts.values(), default=0)


@lru_cache(maxsize=None)
def hyper_edge_list(t: int, n: int) -> tuple[HyperEdge, ...]:
    return tuple(itertools.combinations(range(1, t * n + 1), t))


@lru_cache(maxsize=None)
def hyper_edge_index(t: int, n: int) -> dict[HyperEdge, int]:
    return {e: i for i, e in enumerate(hyper_edge_list(t, n))}


@lru_cache(maxsize=4)
def hpm_table(t: int, n: int, override: bool = False) -> np.ndarray:
    """Edge ids of every perfect t-matching, rows in ``enumerate_hpms`` order."""
    check_hyper_guard(t, n, override)
    idx = hyper_edge_index(t, n)
    table = np.empty((hyper_pm_count(t, n), n), dtype=np.int32)
    for row, edges in enumerate(_groupings(tuple(range(1, t * n + 1)), t)):
        table[row] = [idx[e] for e in edges]
    table.setflags(write=False)
    return table


def hpm_from_row(t: int, n: int, row: Sequence[int]) -> HyperMatching:
    edges = hyper_edge_list(t, n)
    return HyperMatching(t, n, tuple(sorted(edges[i] for i in row)))
