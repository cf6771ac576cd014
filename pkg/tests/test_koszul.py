import itertools
from math import comb

import pytest
from hypothesis import given, strategies as st

from hairycalc import koszul, oracles
from hairycalc.graded_core import InvalidInput
from hairycalc.koszul import (
    LabeledShape, admissible_basis, arnold_reduce, coinvariant_basis, connected_filter,
    contraction_terms, kq_dimension,
)


def dims(basis):
    return {deg: len(v) for deg, v in basis.items()}


def test_admissible_k3():
    assert [len(v) for _, v in sorted(admissible_basis(3, 6).items())] == [1, 3, 2]


def test_cover_all_small():
    assert admissible_basis(2, 5, cover_all=True) == {4: [((0, 1),)]}
    assert admissible_basis(1, 5, cover_all=True) == {}


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_admissible_matches_poincare(n):
    for k in range(1, 8):
        assert dims(admissible_basis(k, n)) == oracles.config_poincare(k, n)


@pytest.mark.parametrize("n", [2, 3, 6])
def test_cover_all_inclusion_exclusion(n):
    for k in range(1, 7):
        want = {}
        for j in range(0, k + 1):
            for deg, c in oracles.config_poincare(max(j, 1), n).items():
                if j == 0 and deg:
                    continue
                want[deg] = want.get(deg, 0) + (-1) ** (k - j) * comb(k, j) * c
        want = {deg: c for deg, c in want.items() if c}
        assert dims(admissible_basis(k, n, cover_all=True)) == want


def test_admissible_rejects_bad_input():
    with pytest.raises(InvalidInput):
        admissible_basis(3, 1)


def test_arnold_inadmissible_pair():
    for n in (4, 5):
        assert arnold_reduce([(0, 2), (1, 2)], n) == {((0, 1), (1, 2)): 1, ((0, 1), (0, 2)): -1}


def test_arnold_square_and_reversal():
    assert arnold_reduce([(0, 1), (0, 1)], 4) == {}
    assert arnold_reduce([(1, 0)], 4) == {((0, 1),): 1}
    assert arnold_reduce([(1, 0)], 5) == {((0, 1),): -1}
    with pytest.raises(InvalidInput):
        arnold_reduce([(1, 1)], 4)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_arnold_relation_vanishes(n):
    acc = {}
    for mono in ([(0, 1), (1, 2)], [(1, 2), (2, 0)], [(2, 0), (0, 1)]):
        for k, c in arnold_reduce(mono, n).items():
            acc[k] = acc.get(k, 0) + c
    assert not any(acc.values())


monomials = st.integers(2, 5).flatmap(lambda k: st.lists(
    st.tuples(st.integers(0, k - 1), st.integers(0, k - 1)).filter(lambda p: p[0] != p[1]),
    min_size=1, max_size=4))


def _mul(a, b, n):
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            for k, c in arnold_reduce(list(ma) + list(mb), n).items():
                out[k] = out.get(k, 0) + ca * cb * c
    return {k: v for k, v in out.items() if v}


@given(monomials, st.sampled_from([4, 5]), st.randoms(use_true_random=False))
def test_arnold_confluence(mono, n, rnd):
    whole = arnold_reduce(mono, n)
    # reduce a prefix first, then the rest
    cut = rnd.randint(0, len(mono))
    staged = _mul(arnold_reduce(mono[:cut], n) if cut else {(): 1},
                  arnold_reduce(mono[cut:], n) if cut < len(mono) else {(): 1}, n)
    assert staged == whole
    # permuting the factors costs the Koszul sign in degree n - 1
    perm = list(range(len(mono)))
    rnd.shuffle(perm)
    odd = (n - 1) % 2
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    sign = -1 if odd and inv % 2 else 1
    shuffled = arnold_reduce([mono[p] for p in perm], n)
    assert shuffled == {k: sign * v for k, v in whole.items()}


def test_coinvariant_examples():
    b = coinvariant_basis((2,), 6, (2,), 1, (2,), connected=True)
    assert {deg: len(v) for deg, v in b.items()} == {1: 1}
    assert coinvariant_basis((2,), 7, (2,), 1, (2,), connected=True) == {}
    assert coinvariant_basis((2, 3), 7, (0, 0), 1, (0, 0)) == {}


def test_connected_filter():
    b = coinvariant_basis((2,), 6, (2,), 1, (2,))[1]
    assert connected_filter(b, 2) == b
    disjoint = {((), ((0, 1), (2, 3))): 1}
    assert connected_filter([disjoint], 4) == []
    assert connected_filter([{((), ()): 1}], 0) == []


def test_contraction_without_colored_edges_is_zero():
    shape = LabeledShape((2,), 6, (2,))
    assert contraction_terms(shape, ((), ((0, 1),))) == []


def test_contraction_repeated_edge_is_zero():
    # vertices 0,1 of color 1 joined by a colored edge; both joined to vertex 2
    shape = LabeledShape((2, 3), 6, (2, 1))
    assert contraction_terms(shape, (((0, 1),), ((0, 2), (1, 2)))) == []


def test_contraction_tadpole_is_zero():
    shape = LabeledShape((2,), 6, (2,))
    assert contraction_terms(shape, (((0, 1),), ((0, 1),))) == []


def test_kq_examples():
    for m in (2, 3, 5):
        assert kq_dimension((m,), (1,), (1,)) == (m, 1)
        assert kq_dimension((m,), (1,), (2,)) == (m + 1, 1)
    assert kq_dimension((2, 3), (2, 0), (1, 0))[1] == 0
    assert kq_dimension((2, 3), (1, 0), (1, 1))[1] == 0


@pytest.mark.parametrize("m,d,s,t", [((2,), 6, (2,), 2), ((3,), 7, (3,), 2), ((2, 3), 7, (1, 1), 2),
                                     ((2, 3), 8, (2, 1), 1)])
def test_labeled_delta_squared_zero(m, d, s, t):
    for kb in koszul.vertex_count_range(s, t):
        shape = LabeledShape(m, d, kb)
        for x in koszul.labeled_basis(shape, s, t, connected=False):
            once = koszul.apply_contraction(shape, {x: 1})
            twice = {}
            for kb2, vec in once.items():
                for kb3, vec3 in koszul.apply_contraction(LabeledShape(m, d, kb2), vec).items():
                    for key, c in vec3.items():
                        twice[(kb3, key)] = twice.get((kb3, key), 0) + c
            assert not any(twice.values())


def test_contraction_descends_to_coinvariants():
    # delta(sigma x) and sigma delta(x) agree after symmetrising the target
    m, d, s, t = (3,), 7, (2,), 2
    for kb in koszul.vertex_count_range(s, t):
        shape = LabeledShape(m, d, kb)
        perms = list(koszul.color_permutations(shape))
        for x in koszul.labeled_basis(shape, s, t, connected=True)[:10]:
            base = koszul.apply_contraction(shape, {x: 1})
            for sigma in perms[:6]:
                moved = koszul.apply_contraction(shape, koszul.act(shape, sigma, x))
                for kb2 in set(base) | set(moved):
                    tgt = LabeledShape(m, d, kb2)
                    assert koszul.symmetrize(tgt, base.get(kb2, {})) == koszul.symmetrize(tgt, moved.get(kb2, {}))


def test_contraction_raises_degree_and_preserves_gradings():
    m, d, s, t = (2, 3), 8, (1, 1), 2
    for kb in koszul.vertex_count_range(s, t):
        for tk in koszul.contraction_matrix(m, d, s, t, kb, connected=True):
            assert sum(tk) == sum(kb) - 1
            assert (koszul.cohomological_degree(m, d, s, t, sum(tk))
                    == koszul.cohomological_degree(m, d, s, t, sum(kb)) + 1)


@pytest.mark.parametrize("m,d,s,t,kbar", [((2,), 6, (2,), 2, (4,)), ((3,), 7, (1,), 2, (4,)),
                                          ((2, 3), 7, (1, 1), 2, (2, 2))])
def test_class_projection_matches_group_average(m, d, s, t, kbar):
    piece = koszul.coinvariant_piece(m, d, s, t, kbar, connected=True)
    for y in piece.labeled:
        rep, sign = piece.classes[y]
        assert koszul.orbit_sum(piece.shape, y) == {k: sign * v for k, v in piece.class_sums[rep].items()}
        assert piece.project({y: 1}) == koszul.symmetrize(piece.shape, {y: 1})
