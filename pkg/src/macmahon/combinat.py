"""Multisets, and streamed enumeration of their permutations, partial maps and
derangements.

Positions of the multiset with exponent vector ``r`` are numbered
``0..N-1`` in the order 1_1 < ... < 1_{r_1} < 2_1 < ...; ``labels[x]`` is the
1-based label of position ``x``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence, Tuple

UNDEFINED = -1


@dataclass(frozen=True)
class MultisetIndex:
    r: Tuple[int, ...]

    def __init__(self, r: Sequence[int]):
        r = tuple(int(x) for x in r)
        if any(x < 0 for x in r):
            raise ValueError(f"multiplicities must be non-negative: {r}")
        object.__setattr__(self, "r", r)

    @property
    def n(self) -> int:
        return len(self.r)

    @property
    def size(self) -> int:
        return sum(self.r)

    @property
    def labels(self) -> Tuple[int, ...]:
        return tuple(i + 1 for i, ri in enumerate(self.r) for _ in range(ri))

    def position_names(self) -> Tuple[str, ...]:
        return tuple(f"{i + 1}_{a + 1}" for i, ri in enumerate(self.r) for a in range(ri))

    def factorial(self) -> int:
        return multiset_factorial(self)

    def __iter__(self):
        return iter(self.r)

    def __len__(self) -> int:
        return len(self.r)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.r)) + ")"


def as_multiset(r) -> MultisetIndex:
    """Accept a MultisetIndex, a sequence of multiplicities, or a bare size N
    (read as N copies of label 1)."""
    if isinstance(r, MultisetIndex):
        return r
    if isinstance(r, int):
        return MultisetIndex((r,))
    return MultisetIndex(r)


def multiset_factorial(r) -> int:
    out = 1
    for x in as_multiset(r).r:
        out *= math.factorial(x)
    return out


def compositions(n: int, total: int) -> Iterator[Tuple[int, ...]]:
    """All n-tuples of non-negative ints summing to ``total``, lexicographically
    decreasing (so (1,0) precedes (0,1))."""
    if n == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(n - 1, total - first):
            yield (first,) + rest


def multisets_up_to(n: int, n_max: int) -> Iterator[MultisetIndex]:
    """Every exponent vector of length n with size <= n_max, graded by size."""
    if n < 1 or n_max < 0:
        raise ValueError("need n >= 1 and n_max >= 0")
    for total in range(n_max + 1):
        for r in compositions(n, total):
            yield MultisetIndex(r)


def multisets_of_size(n: int, total: int) -> Iterator[MultisetIndex]:
    for r in compositions(n, total):
        yield MultisetIndex(r)


def cycles_of(target: Sequence[int]) -> list:
    """Cycles of a partial injective map given as a target list (UNDEFINED for
    positions outside the domain).  Paths are ignored."""
    n = len(target)
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        path = []
        x = start
        while x != UNDEFINED and not seen[x]:
            seen[x] = True
            path.append(x)
            x = target[x]
        if x != UNDEFINED and x in path:
            out.append(tuple(path[path.index(x):]))
    return out


def cycle_count(target: Sequence[int]) -> int:
    """Number of cycles of a permutation or partial injective map."""
    n = len(target)
    seen = [False] * n
    count = 0
    for start in range(n):
        if seen[start]:
            continue
        x = start
        while x != UNDEFINED and not seen[x]:
            seen[x] = True
            x = target[x]
        # walks that close on themselves end back at `start`
        if x == start:
            count += 1
    return count


class MultisetPermutation(NamedTuple):
    target: Tuple[int, ...]
    labels: Tuple[int, ...]
    cycle_count: int

    @property
    def size(self) -> int:
        return len(self.target)

    def cycles(self) -> list:
        return cycles_of(self.target)

    def fixed_points(self) -> Tuple[int, ...]:
        return tuple(x for x, y in enumerate(self.target) if x == y)


class PartialMap(NamedTuple):
    target: Tuple[int, ...]  # UNDEFINED outside the domain
    labels: Tuple[int, ...]
    induced_cycle_count: int

    @property
    def size(self) -> int:
        return len(self.target)

    @property
    def domain(self) -> frozenset:
        return frozenset(x for x, y in enumerate(self.target) if y != UNDEFINED)

    @property
    def image(self) -> frozenset:
        return frozenset(y for y in self.target if y != UNDEFINED)

    def assignment(self) -> dict:
        return {x: y for x, y in enumerate(self.target) if y != UNDEFINED}

    def induced_cycles(self) -> list:
        """Cycles of the map; their union is where the induced permutation acts."""
        return cycles_of(self.target)

    def induced_permutation(self) -> dict:
        return {x: self.target[x] for cyc in self.induced_cycles() for x in cyc}


def permutations(r) -> Iterator[MultisetPermutation]:
    """All N! permutations of the positions, lexicographic in the target."""
    r = as_multiset(r)
    labels = r.labels
    for target in itertools.permutations(range(r.size)):
        yield MultisetPermutation(target, labels, cycle_count(target))


def derangements(r) -> Iterator[MultisetPermutation]:
    """Permutations with no fixed position (identical labels still count as
    distinct positions)."""
    r = as_multiset(r)
    labels = r.labels
    n = r.size
    target = [UNDEFINED] * n
    used = [False] * n

    def rec(x):
        if x == n:
            t = tuple(target)
            yield MultisetPermutation(t, labels, cycle_count(t))
            return
        for y in range(n):
            if y != x and not used[y]:
                used[y] = True
                target[x] = y
                yield from rec(x + 1)
                used[y] = False
        target[x] = UNDEFINED

    yield from rec(0)


def partial_maps(r) -> Iterator[PartialMap]:
    """All injective partial maps of the positions, by domain size, then
    domain, then image tuple; the empty map comes first."""
    r = as_multiset(r)
    labels = r.labels
    n = r.size
    positions = range(n)
    for k in range(n + 1):
        for dom in itertools.combinations(positions, k):
            for img in itertools.permutations(positions, k):
                target = [UNDEFINED] * n
                for x, y in zip(dom, img):
                    target[x] = y
                t = tuple(target)
                yield PartialMap(t, labels, cycle_count(t))


def partial_map_count(n: int) -> int:
    return sum(math.comb(n, k) ** 2 * math.factorial(k) for k in range(n + 1))
