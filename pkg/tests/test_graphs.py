import itertools
import math
from collections import Counter
from fractions import Fraction

import pytest

from macmahon import combinat, graphs
from macmahon.combinat import MultisetIndex, MultisetPermutation, UNDEFINED, cycle_count
from macmahon.graphs import (CYCLE, PermGraph, aut_order, canonical_key, class_sum,
                             classes_by_enumeration, enumerate_classes, graph_of, lyndon_cycles,
                             lyndon_words, necklace_count, primitive_period)
from macmahon.poly import var

beta = var("beta")
A11 = var("A", 1, 1)

# r = (3,2,0,1): positions 1_1 1_2 1_3 2_1 2_2 4_1
TWO_CYCLE_R = MultisetIndex((3, 2, 0, 1))
TWO_CYCLE_TARGET = (3, 4, 5, 1, 0, 2)  # (1_1 2_1 1_2 2_2)(1_3 4_1)


def _perm(target, r):
    return MultisetPermutation(tuple(target), r.labels, cycle_count(target))


def label_group(r):
    """All label-preserving position permutations, as tuples."""
    blocks, start = [], 0
    for ri in r.r:
        blocks.append(list(range(start, start + ri)))
        start += ri
    for parts in itertools.product(*(itertools.permutations(b) for b in blocks)):
        lam = [0] * r.size
        for block, image in zip(blocks, parts):
            for x, y in zip(block, image):
                lam[x] = y
        yield tuple(lam)


def stabilizer_order(target, r):
    count = 0
    for lam in label_group(r):
        # lam pi lam^-1 == pi  <=>  lam(pi(x)) == pi(lam(x))
        if all(lam[target[x]] == target[lam[x]] for x in range(len(target))
               if target[x] != UNDEFINED) and all(
                target[lam[x]] == UNDEFINED for x in range(len(target)) if target[x] == UNDEFINED):
            count += 1
    return count


def test_four_and_two_cycle_components():
    g = graph_of(_perm(TWO_CYCLE_TARGET, TWO_CYCLE_R))
    comps = sorted(g.labelled_components())
    assert comps == [(CYCLE, (1, 2, 1, 2)), (CYCLE, (1, 4))]


def test_four_and_two_cycle_orbit():
    pi = _perm(TWO_CYCLE_TARGET, TWO_CYCLE_R)
    key = canonical_key(graph_of(pi))
    assert aut_order(graph_of(pi)) == 2
    same = sum(1 for p in combinat.permutations(TWO_CYCLE_R) if canonical_key(graph_of(p)) == key)
    assert same == 6 == TWO_CYCLE_R.factorial() // 2


def test_identity_loop():
    g = graph_of(_perm((0,), MultisetIndex((1,))))
    assert g.labelled_components() == [(CYCLE, (1,))]


def test_in_degree_checked():
    with pytest.raises(ValueError):
        PermGraph((1, 1), (0, 0))


def test_canonical_key_examples():
    r3 = MultisetIndex((3,))
    assert canonical_key(graph_of(_perm((1, 2, 0), r3))) == canonical_key(graph_of(_perm((2, 0, 1), r3)))
    assert canonical_key(PermGraph((1, 2), (1, 0))) != canonical_key(PermGraph((1, 3), (1, 0)))
    assert canonical_key(PermGraph((1, 2, 2), (1, 2, 0))) == canonical_key(PermGraph((2, 1, 2), (1, 2, 0)))


def test_aut_order_examples():
    assert aut_order(PermGraph((1, 2, 1, 2), (1, 2, 3, 0))) == 2
    assert aut_order(PermGraph((1, 1, 1), (0, 1, 2))) == 6


@pytest.mark.parametrize("r", [(2, 2), (3, 1), (4,), (1, 1, 2), (2, 1)])
def test_aut_order_equals_stabilizer_full(r):
    r = MultisetIndex(r)
    for pi in combinat.permutations(r):
        assert aut_order(graph_of(pi)) == stabilizer_order(pi.target, r)


@pytest.mark.parametrize("r", [(2, 1), (3,), (1, 2)])
def test_aut_order_equals_stabilizer_partial(r):
    r = MultisetIndex(r)
    for psi in combinat.partial_maps(r):
        assert aut_order(graph_of(psi)) == stabilizer_order(psi.target, r)


@pytest.mark.parametrize("n,N", [(1, 5), (2, 4), (2, 5), (3, 3)])
def test_orbit_stabilizer_sums_to_n_factorial(n, N):
    for r in combinat.multisets_of_size(n, N):
        total = 0
        for c in enumerate_classes(n, N, "full"):
            if Counter(l for _, labs in c.key for l in labs) == Counter(r.labels):
                assert r.factorial() % c.aut_order == 0
                total += Fraction(r.factorial(), c.aut_order)
        assert total == math.factorial(N)


@pytest.mark.parametrize("n,N,kind,count", [(1, 3, "full", 3), (1, 1, "partial", 2), (1, 2, "derangement", 1)])
def test_class_counts(n, N, kind, count):
    assert len(list(enumerate_classes(n, N, kind))) == count


def test_derangement_class_weight():
    (c,) = enumerate_classes(1, 2, "derangement")
    assert c.weight == beta * A11 ** 2


def test_partial_single_vertex_classes():
    ws = {c.weight for c in enumerate_classes(1, 1, "partial")}
    assert ws == {beta * A11, var("theta", 1) * var("phi", 1)}


@pytest.mark.parametrize("kind", graphs.KINDS)
@pytest.mark.parametrize("n,N", [(1, 4), (2, 3), (2, 4), (3, 2)])
def test_enumerated_classes_match_brute_force(kind, n, N):
    """The direct class list equals the set of canonicalised graphs of all maps,
    and each class appears |Lambda(r)| / |Aut| times."""
    brute = classes_by_enumeration(n, N, kind)
    direct = {c.key: c.aut_order for c in enumerate_classes(n, N, kind)}
    seen = set()
    for r, counts in brute.items():
        for key, cnt in counts.items():
            assert cnt == combinat.multiset_factorial(r) // direct[key]
            seen.add(key)
    assert seen == set(direct)


def test_class_sum_one_label_three_vertices():
    expected = (beta ** 3 + beta ** 2 * 3 + beta * 2).scale(Fraction(1, 6)) * A11 ** 3
    assert class_sum(1, 3, "full") == expected


def test_class_json_shape():
    (c,) = [c for c in enumerate_classes(1, 2, "full") if c.aut_order == 2 and len(c.key) == 1]
    obj = c.to_json()
    assert obj["aut_order"] == 2
    assert obj["components"] == [{"kind": "cycle", "labels": [1, 1], "multiplicity": 1,
                                  "aut": 2, "weight": str(beta * A11 ** 2)}]


def test_primitive_period():
    assert primitive_period((1, 2, 1, 2)) == 2
    assert primitive_period((1, 1, 1)) == 1
    assert primitive_period((1, 2, 2)) == 3


def test_lyndon_small():
    cyc = lyndon_cycles(2, 2)
    assert [w for w, _ in cyc] == [(1,), (2,), (1, 2)]
    assert cyc[2][1] == var("A", 1, 2) * var("A", 2, 1)
    assert lyndon_cycles(1, 5) == [((1,), A11)]
    with pytest.raises(ValueError):
        lyndon_cycles(2, 0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lyndon_counts_match_moebius(n):
    words = list(lyndon_words(n, 6))
    assert len(set(words)) == len(words)
    by_len = Counter(len(w) for w in words)
    for t in range(1, 7):
        assert by_len[t] == necklace_count(n, t)


def test_lyndon_length_six_binary():
    assert necklace_count(2, 6) == (2 ** 6 - 2 ** 3 - 2 ** 2 + 2) // 6 == 9


@pytest.mark.parametrize("n,t", [(2, 4), (3, 3)])
def test_lyndon_words_are_aperiodic_minimal_rotations(n, t):
    brute = {seq for seq in itertools.product(range(1, n + 1), repeat=t)
             if primitive_period(seq) == t and graphs.min_rotation(seq) == seq}
    assert {w for w in lyndon_words(n, t) if len(w) == t} == brute
