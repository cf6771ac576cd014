import itertools

import pytest
from hypothesis import given, strategies as st

from hairycalc.graded_core import (
    COLORED_COMPONENT, COLORED_EDGE, EXTERNAL_VERTEX, INTERNAL_VERTEX, NON_COLORED_EDGE,
    InvalidInput, OrientationData, OrientationElement, edge_flip_sign, koszul_sign, parity_sign,
)


def test_swap_two_odd():
    assert koszul_sign([1, 0], [5, 5]) == -1


def test_swap_odd_even():
    assert koszul_sign([1, 0], [5, 4]) == 1


def test_three_cycle_odd():
    assert koszul_sign([1, 2, 0], [3, 3, 3]) == 1


def test_length_mismatch():
    with pytest.raises(InvalidInput):
        koszul_sign([0, 1], [1])
    with pytest.raises(InvalidInput):
        koszul_sign([0, 0], [1, 1])


def test_edge_flip_examples():
    assert edge_flip_sign(NON_COLORED_EDGE, 6, [2]) == 1
    assert edge_flip_sign(NON_COLORED_EDGE, 7, [2]) == -1
    assert edge_flip_sign(COLORED_EDGE, 7, [3], color=1) == -1
    assert edge_flip_sign(COLORED_EDGE, 7, [2, 4], color=2) == 1


@pytest.mark.parametrize("kind", [INTERNAL_VERTEX, EXTERNAL_VERTEX, COLORED_COMPONENT])
def test_edge_flip_rejects_vertices(kind):
    with pytest.raises(InvalidInput):
        edge_flip_sign(kind, 6, [2], color=1)


def test_element_degrees():
    m = [2, 5]
    assert OrientationElement(NON_COLORED_EDGE, 0).degree(7, m) == 6
    assert OrientationElement(INTERNAL_VERTEX, 0).degree(7, m) == -7
    assert OrientationElement(EXTERNAL_VERTEX, 0, 2).degree(7, m) == -5
    assert OrientationElement(COLORED_COMPONENT, 0, 1).degree(7, m) == -2
    assert OrientationElement(COLORED_EDGE, 0, 2).degree(7, m, "first") == 4
    assert OrientationElement(COLORED_EDGE, 0, 2).degree(7, m, "second") == -1


def test_element_validation():
    with pytest.raises(InvalidInput):
        OrientationElement("bogus", 0)
    with pytest.raises(InvalidInput):
        OrientationElement(COLORED_EDGE, 0)
    with pytest.raises(InvalidInput):
        OrientationElement(EXTERNAL_VERTEX, 0, 3).degree(7, [2])


def test_reorder_sign():
    a = OrientationElement(NON_COLORED_EDGE, "a")
    b = OrientationElement(NON_COLORED_EDGE, "b")
    v = OrientationElement(INTERNAL_VERTEX, "v")
    data = OrientationData((a, v, b))
    new, sign = data.reorder((b, v, a), 7, [2])
    assert new.order == (b, v, a)
    assert sign == 1       # edges even for d = 7
    _, sign = data.reorder((b, v, a), 6, [2])
    assert sign == -1      # edges odd, vertex even for d = 6
    with pytest.raises(InvalidInput):
        data.reorder((a, b), 6, [2])
    with pytest.raises(InvalidInput):
        OrientationData((a, a))


perm_data = st.integers(1, 7).flatmap(lambda n: st.tuples(
    st.permutations(range(n)), st.permutations(range(n)),
    st.lists(st.integers(-9, 9), min_size=n, max_size=n)))


@given(perm_data)
def test_koszul_sign_is_homomorphism(data):
    sigma, tau, degs = data
    degs1 = [degs[sigma[i]] for i in range(len(degs))]
    comp = [sigma[tau[i]] for i in range(len(degs))]
    assert koszul_sign(comp, degs) == koszul_sign(sigma, degs) * koszul_sign(tau, degs1)


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=8), st.randoms(use_true_random=False))
def test_fixing_odd_elements_is_positive(degs, rnd):
    even = [i for i, x in enumerate(degs) if x % 2 == 0]
    shuffled = list(even)
    rnd.shuffle(shuffled)
    perm = list(range(len(degs)))
    for i, j in zip(even, shuffled):
        perm[i] = j
    assert koszul_sign(perm, degs) == 1


@given(st.lists(st.tuples(st.integers(0, 20), st.integers(0, 1)), max_size=8, unique_by=lambda x: x[0]))
def test_parity_sign_matches_koszul_sign(items):
    order = sorted(range(len(items)), key=lambda i: items[i][0])
    assert parity_sign(items) == koszul_sign(order, [p for _, p in items])


def test_brute_force_small():
    for n in range(5):
        degs = [1, 2, 3, 1, 0][:n]
        for perm in itertools.permutations(range(n)):
            # sign by adjacent transpositions
            cur = list(range(n))
            target = list(perm)
            sign = 1
            for i in range(n):
                j = cur.index(target[i])
                while j > i:
                    if degs[cur[j]] % 2 and degs[cur[j - 1]] % 2:
                        sign = -sign
                    cur[j], cur[j - 1] = cur[j - 1], cur[j]
                    j -= 1
            assert koszul_sign(perm, degs) == sign
