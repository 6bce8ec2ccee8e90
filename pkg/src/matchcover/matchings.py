"""Perfect matchings of the complete graph K_2n on vertices 1..2n."""

from __future__ import annotations

import itertools
import json
import random
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .bounds import pm_count

Edge = tuple[int, int]

# (2*9 - 1)!! = 34459425 matchings already; anything larger needs an override
ENUMERATION_GUARD_N = 8


class GuardError(RuntimeError):
    """Raised when an exhaustive computation exceeds its size guard."""


class MatchingError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class PerfectMatching:
    n: int
    edges: tuple[Edge, ...]

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def partner(self, v: int) -> int:
        for a, b in self.edges:
            if a == v:
                return b
            if b == v:
                return a
        raise KeyError(v)

    def to_list(self) -> list[list[int]]:
        return [list(e) for e in self.edges]


@dataclass(frozen=True, order=True)
class XMatching:
    edges: tuple[Edge, ...]

    @property
    def x(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(v for e in self.edges for v in e))

    @classmethod
    def of(cls, pairs: Iterable[Sequence[int]]) -> "XMatching":
        edges = tuple(sorted(_edge(p) for p in pairs))
        seen = [v for e in edges for v in e]
        if len(set(seen)) != len(seen):
            raise MatchingError(f"edges of an x-matching must be disjoint: {edges}")
        return cls(edges)


def _edge(pair: Sequence[int]) -> Edge:
    if len(pair) != 2:
        raise MatchingError(f"an edge has two endpoints, got {list(pair)}")
    a, b = int(pair[0]), int(pair[1])
    if a == b:
        raise MatchingError(f"loop edge ({a}, {b})")
    return (a, b) if a < b else (b, a)


def canonicalize(pairs: Iterable[Sequence[int]], n: int) -> PerfectMatching:
    """Validate a list of vertex pairs and return the canonical matching."""
    edges = sorted(_edge(p) for p in pairs)
    if len(edges) != n:
        raise MatchingError(f"expected {n} edges covering {2 * n} vertices, got {len(edges)}")
    seen: set[int] = set()
    for a, b in edges:
        for v in (a, b):
            if not 1 <= v <= 2 * n:
                raise MatchingError(f"vertex {v} outside 1..{2 * n}")
            if v in seen:
                raise MatchingError(f"vertex {v} repeated")
            seen.add(v)
    return PerfectMatching(n, tuple(edges))


def _pairings(vertices: tuple[int, ...]) -> Iterator[tuple[Edge, ...]]:
    if not vertices:
        yield ()
        return
    first, rest = vertices[0], vertices[1:]
    for i, v in enumerate(rest):
        remaining = rest[:i] + rest[i + 1 :]
        for tail in _pairings(remaining):
            yield ((first, v),) + tail


def check_guard(n: int, override: bool = False) -> None:
    if n > ENUMERATION_GUARD_N and not override:
        raise GuardError(
            f"exhaustive enumeration over K_{2 * n} ({pm_count(n)} matchings) "
            f"needs override_guards"
        )


def enumerate_pms(n: int, override: bool = False) -> Iterator[PerfectMatching]:
    """All perfect matchings of K_2n in lexicographic order of canonical form."""
    if n < 1:
        raise ValueError("n must be >= 1")
    check_guard(n, override)
    for edges in _pairings(tuple(range(1, 2 * n + 1))):
        yield PerfectMatching(n, edges)


def enumerate_pms_shard(n: int, partner: int, override: bool = False) -> Iterator[PerfectMatching]:
    """The slice of ``enumerate_pms`` whose first edge is (1, partner)."""
    check_guard(n, override)
    if not 2 <= partner <= 2 * n:
        raise ValueError(f"partner must lie in 2..{2 * n}")
    rest = tuple(v for v in range(2, 2 * n + 1) if v != partner)
    for tail in _pairings(rest):
        yield PerfectMatching(n, ((1, partner),) + tail)


def random_pm(n: int, rng: random.Random) -> PerfectMatching:
    """Uniform perfect matching: pair the smallest free vertex with a random free vertex."""
    free = list(range(1, 2 * n + 1))
    edges = []
    while free:
        a = free.pop(0)
        b = free.pop(rng.randrange(len(free)))
        edges.append((a, b))
    return PerfectMatching(n, tuple(edges))


def agreement(m1: PerfectMatching, m2: PerfectMatching) -> int:
    if m1.n != m2.n:
        raise MatchingError(f"matchings of different size: n={m1.n} vs n={m2.n}")
    return len(set(m1.edges) & set(m2.edges))


def x_submatchings(m: PerfectMatching, x: int) -> Iterator[XMatching]:
    if not 0 <= x <= m.n:
        raise ValueError(f"need 0 <= x <= {m.n}, got {x}")
    for combo in itertools.combinations(m.edges, x):
        yield XMatching(combo)


def is_good_vertex_set(vertices: Iterable[int], m: PerfectMatching) -> bool:
    u = set(vertices)
    if len(u) > m.n:
        return False
    return not any(a in u and b in u for a, b in m.edges)


@dataclass(frozen=True)
class MatchingFamily:
    n: int
    members: tuple[PerfectMatching, ...] = ()

    def __post_init__(self):
        for m in self.members:
            if m.n != self.n:
                raise MatchingError(f"family member with n={m.n} in a family with n={self.n}")

    @property
    def s(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[PerfectMatching]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def to_json(self) -> dict:
        return {
            "type": "matching_family",
            "n": self.n,
            "matchings": [m.to_list() for m in self.members],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "MatchingFamily":
        if not isinstance(doc, dict) or doc.get("type") != "matching_family":
            raise MatchingError('expected a document with "type": "matching_family"')
        n = doc.get("n")
        if not isinstance(n, int) or n < 1:
            raise MatchingError(f"bad n: {n!r}")
        members = []
        for i, pairs in enumerate(doc.get("matchings", [])):
            try:
                members.append(canonicalize(pairs, n))
            except (MatchingError, TypeError) as exc:
                raise MatchingError(f"matching #{i}: {exc}") from exc
        return cls(n, tuple(members))


def load_family(path) -> MatchingFamily:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MatchingError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    return MatchingFamily.from_json(doc)


def dump_family(family: MatchingFamily, path) -> None:
    with open(path, "w") as fh:
        json.dump(family.to_json(), fh)
        fh.write("\n")


def edge_frequency(family: MatchingFamily) -> tuple[dict[Edge, int], int]:
    counts = Counter(e for m in family.members for e in m.edges)
    return dict(counts), max(counts.values(), default=0)


# --- array views used by the exhaustive scans ---


@lru_cache(maxsize=None)
def edge_list(n: int) -> tuple[Edge, ...]:
    """Edges of K_2n in lexicographic order; position = edge id."""
    return tuple(itertools.combinations(range(1, 2 * n + 1), 2))


@lru_cache(maxsize=None)
def edge_index(n: int) -> dict[Edge, int]:
    return {e: i for i, e in enumerate(edge_list(n))}


@lru_cache(maxsize=4)
def pm_table(n: int, override: bool = False) -> np.ndarray:
    """Edge ids of every perfect matching of K_2n, one row per matching, in
    ``enumerate_pms`` order."""
    check_guard(n, override)
    idx = edge_index(n)
    table = np.empty((pm_count(n), n), dtype=np.int32)
    for row, edges in enumerate(_pairings(tuple(range(1, 2 * n + 1)))):
        table[row] = [idx[e] for e in edges]
    table.setflags(write=False)
    return table


def pm_from_row(n: int, row: Sequence[int]) -> PerfectMatching:
    edges = edge_list(n)
    return PerfectMatching(n, tuple(sorted(edges[i] for i in row)))
