"""Permutation graphs of multisets, their isomorphism classes and automorphism
orders.

Every vertex of a (partial) permutation graph has in- and out-degree at most
one, so a graph is a disjoint union of directed cycles and open necklaces
(directed paths, an isolated vertex being the degenerate case).  Isomorphism
that preserves labels therefore reduces to comparing sorted lists of
per-component canonical label sequences, which is what ``canonical_key``
builds.  ``enumerate_classes`` generates those component multisets directly,
giving the class sum  sum_gamma w(gamma)/|Aut(gamma)|  without touching the
N! permutations.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, Iterator, List, Sequence, Tuple

from . import combinat
from .combinat import UNDEFINED, as_multiset
from .poly import Polynomial, var

KINDS = ("full", "partial", "derangement")

CYCLE = "cycle"
PATH = "path"


def _label_key(label):
    # plain labels are ints; primed labels are strings such as "2'"
    if isinstance(label, str):
        return (0, int(label.rstrip("'")))
    return (1, label)


def _seq_key(seq):
    return tuple(_label_key(x) for x in seq)


def min_rotation(seq: Sequence) -> tuple:
    seq = tuple(seq)
    if not seq:
        return seq
    return min((seq[k:] + seq[:k] for k in range(len(seq))), key=_seq_key)


def primitive_period(seq: Sequence) -> int:
    """Smallest s > 0 with seq invariant under rotation by s (s divides len)."""
    t = len(seq)
    seq = tuple(seq)
    for s in range(1, t + 1):
        if t % s == 0 and seq[s:] + seq[:s] == seq:
            return s
    return t


@dataclass(frozen=True)
class PermGraph:
    labels: Tuple  # label of each vertex
    succ: Tuple[int, ...]  # successor vertex, UNDEFINED if none

    def __post_init__(self):
        if len(self.labels) != len(self.succ):
            raise ValueError("labels and successors differ in length")
        targets = [y for y in self.succ if y != UNDEFINED]
        if len(set(targets)) != len(targets):
            raise ValueError("a vertex has in-degree above one")

    @property
    def size(self) -> int:
        return len(self.labels)

    def in_degree(self, v: int) -> int:
        return sum(1 for y in self.succ if y == v)

    def out_degree(self, v: int) -> int:
        return 0 if self.succ[v] == UNDEFINED else 1

    def components(self) -> List[Tuple[str, tuple]]:
        """(kind, vertex sequence) per component; paths read from their
        source end, cycles from their smallest vertex."""
        n = self.size
        has_pred = [False] * n
        for y in self.succ:
            if y != UNDEFINED:
                has_pred[y] = True
        seen = [False] * n
        out = []
        for start in range(n):
            if has_pred[start]:
                continue
            path = []
            x = start
            while x != UNDEFINED:
                seen[x] = True
                path.append(x)
                x = self.succ[x]
            out.append((PATH, tuple(path)))
        for start in range(n):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.succ[x]
            out.append((CYCLE, tuple(cyc)))
        return out

    def labelled_components(self) -> List[Tuple[str, tuple]]:
        return [(kind, tuple(self.labels[v] for v in verts)) for kind, verts in self.components()]


def graph_of(pi, r=None) -> PermGraph:
    """Graph with one vertex per position (carrying its label) and an edge
    x -> pi(x) wherever pi is defined."""
    labels = tuple(pi.labels) if r is None else as_multiset(r).labels
    if len(labels) != len(pi.target):
        raise ValueError("map does not act on the positions of the multiset")
    return PermGraph(labels, tuple(pi.target))


def component_key(kind: str, labels: Sequence) -> Tuple[str, tuple]:
    return (kind, min_rotation(labels) if kind == CYCLE else tuple(labels))


def _component_sort_key(ck):
    return (ck[0], len(ck[1]), _seq_key(ck[1]))


def canonical_key(g: PermGraph) -> tuple:
    """Equal for two graphs iff they are isomorphic by a label-preserving
    vertex bijection."""
    return tuple(sorted((component_key(k, labs) for k, labs in g.labelled_components()),
                        key=_component_sort_key))


def _component_aut(ck) -> int:
    kind, labs = ck
    return len(labs) // primitive_period(labs) if kind == CYCLE else 1


def aut_order_of_key(key: Sequence) -> int:
    out = 1
    for ck, m in Counter(key).items():
        out *= math.factorial(m) * _component_aut(ck) ** m
    return out


def aut_order(g: PermGraph) -> int:
    """|Aut(g)| = prod over distinct components of m! * |Aut(component)|^m;
    a cycle of length t and primitive period s has t/s automorphisms, a
    necklace has one."""
    return aut_order_of_key(canonical_key(g))


# -- weights ---------------------------------------------------------------

def _edge(a, b) -> Polynomial:
    return var("A", a, b)


def component_weight(ck, with_beta: bool = True) -> Polynomial:
    kind, labs = ck
    w = Polynomial.const(1)
    if kind == CYCLE:
        t = len(labs)
        for k in range(t):
            w = w * _edge(labs[k], labs[(k + 1) % t])
        return w * var("beta") if with_beta else w
    for a, b in zip(labs, labs[1:]):
        w = w * _edge(a, b)
    return var("theta", labs[0]) * w * var("phi", labs[-1])


def graph_weight(key: Sequence) -> Polynomial:
    w = Polynomial.const(1)
    for ck in key:
        w = w * component_weight(ck)
    return w


# -- class enumeration -----------------------------------------------------

@dataclass(frozen=True)
class GraphClass:
    key: tuple
    aut_order: int
    weight: Polynomial

    @property
    def size(self) -> int:
        return sum(len(labs) for _, labs in self.key)

    def multiplicities(self) -> List[Tuple[tuple, int]]:
        return sorted(Counter(self.key).items(), key=lambda cm: _component_sort_key(cm[0]))

    def to_json(self) -> dict:
        return {
            "components": [
                {"kind": kind, "labels": list(labs), "multiplicity": m,
                 "aut": _component_aut((kind, labs)), "weight": str(component_weight((kind, labs)))}
                for (kind, labs), m in self.multiplicities()
            ],
            "aut_order": self.aut_order,
            "weight": str(self.weight),
        }


def cycle_types(n: int, t: int) -> List[tuple]:
    """One label sequence (minimal rotation) per isomorphism class of t-cycles."""
    return [seq for seq in product(range(1, n + 1), repeat=t) if min_rotation(seq) == seq]


def component_catalogue(n: int, max_size: int, kind: str) -> List[Tuple[str, tuple]]:
    if kind not in KINDS:
        raise ValueError(f"unknown graph kind {kind!r}")
    out = []
    for t in range(1, max_size + 1):
        if kind != "derangement" or t >= 2:
            out.extend((CYCLE, seq) for seq in cycle_types(n, t))
        if kind == "partial":
            out.extend((PATH, seq) for seq in product(range(1, n + 1), repeat=t))
    return out


def enumerate_classes(n: int, N: int, kind: str = "full") -> Iterator[GraphClass]:
    """Every isomorphism class of graphs on exactly N vertices labelled from
    1..n: multisets of catalogue components whose sizes sum to N."""
    if N < 0:
        raise ValueError("N must be non-negative")
    cat = component_catalogue(n, N, kind)
    weights = [component_weight(ck) for ck in cat]
    auts = [_component_aut(ck) for ck in cat]

    def rec(idx: int, remaining: int, chosen: list):
        if remaining == 0:
            key = []
            w = Polynomial.const(1)
            aut = 1
            for k, m in chosen:
                key.extend([cat[k]] * m)
                w = w * weights[k] ** m
                aut *= math.factorial(m) * auts[k] ** m
            key.sort(key=_component_sort_key)
            yield GraphClass(tuple(key), aut, w)
            return
        if idx == len(cat):
            return
        size = len(cat[idx][1])
        for m in range(remaining // size, -1, -1):
            if m:
                chosen.append((idx, m))
            yield from rec(idx + 1, remaining - m * size, chosen)
            if m:
                chosen.pop()

    yield from rec(0, N, [])


def class_sum(n: int, N: int, kind: str = "full") -> Polynomial:
    total = Polynomial()
    for c in enumerate_classes(n, N, kind):
        total = total + c.weight.scale(Fraction(1, c.aut_order))
    return total


_ENUMERATORS = {
    "full": combinat.permutations,
    "partial": combinat.partial_maps,
    "derangement": combinat.derangements,
}


def classes_by_enumeration(n: int, N: int, kind: str = "full") -> Dict[tuple, Dict[tuple, int]]:
    """Brute-force path: canonicalise every map of every multiset of size N.
    Returns {r: {canonical key: number of maps with that graph}}."""
    out = {}
    for r in combinat.multisets_of_size(n, N):
        counts: Counter = Counter()
        for pi in _ENUMERATORS[kind](r):
            counts[canonical_key(graph_of(pi, r))] += 1
        out[r.r] = dict(counts)
    return out


# -- primitive cycles --------------------------------------------------------

def lyndon_words(n: int, max_len: int) -> Iterator[tuple]:
    """Lyndon words over 1..n of length 1..max_len (Duval's generation order)."""
    if max_len < 1:
        return
    w = [0]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == n:
            w.pop()


def lyndon_cycles(n: int, max_grade: int) -> List[Tuple[tuple, Polynomial]]:
    """Primitive cycles with at most ``max_grade`` vertices, one per rotation
    class, with their beta-free weight prod A(w_i, w_{i+1}) taken cyclically."""
    if max_grade < 1:
        raise ValueError("max_grade must be at least 1")
    out = []
    for word in lyndon_words(n, max_grade):
        out.append((word, component_weight((CYCLE, word), with_beta=False)))
    out.sort(key=lambda wp: (len(wp[0]), wp[0]))
    return out


def necklace_count(n: int, t: int) -> int:
    """Number of aperiodic necklaces of length t over n letters (Moebius sum)."""
    def mobius(d):
        out, k, x = 1, 2, d
        while k * k <= x:
            if x % k == 0:
                x //= k
                if x % k == 0:
                    return 0
                out = -out
            k += 1
        return -out if x > 1 else out

    return sum(mobius(d) * n ** (t // d) for d in range(1, t + 1) if t % d == 0) // t
