from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from hairycalc import _kernels, linalg
from hairycalc.linalg import (
    ConsistencyError, SparseMatrix, homology_dims, independent_subset, rank, rank_exact,
    rank_mod, solve_in_span,
)


def dense(rows, cols, vals):
    return [[vals[i * cols + j] for j in range(cols)] for i in range(rows)]


matrices = st.integers(0, 6).flatmap(lambda r: st.integers(0, 6).flatmap(
    lambda c: st.lists(st.integers(-3, 3), min_size=r * c, max_size=r * c).map(
        lambda v: (r, c, v))))


def test_zero_matrix():
    assert rank(SparseMatrix(5, 7)) == 0


def test_identity():
    assert rank(SparseMatrix.identity(4)) == 4


def test_no_stored_zeros():
    m = SparseMatrix(2, 2, {(0, 0): 0, (1, 1): Fraction(1, 2)})
    assert m.entries == {(1, 1): Fraction(1, 2)}
    with pytest.raises(ValueError):
        SparseMatrix(1, 1, {(1, 0): 1})


def test_rational_entries():
    m = SparseMatrix.from_dense([[Fraction(1, 3), Fraction(2, 3)], [Fraction(1, 2), 1]])
    assert rank(m) == 1


def test_large_entries_stay_exact():
    big = 10 ** 40
    m = SparseMatrix.from_dense([[big, big + 1], [big - 1, big]])
    assert rank(m) == 2
    m = SparseMatrix.from_dense([[big, 2 * big], [3, 6]])
    assert rank(m) == 1


@given(matrices)
def test_rank_matches_sympy(data):
    r, c, v = data
    m = SparseMatrix.from_dense(dense(r, c, v)) if r and c else SparseMatrix(r, c)
    want = sympy.Matrix(r, c, v).rank() if r and c else 0
    assert rank_exact(m) == want


@given(matrices, st.randoms(use_true_random=False))
def test_rank_transpose_and_permutation(data, rnd):
    r, c, v = data
    m = SparseMatrix.from_dense(dense(r, c, v)) if r and c else SparseMatrix(r, c)
    rp = list(range(r))
    cp = list(range(c))
    rnd.shuffle(rp)
    rnd.shuffle(cp)
    k = rank(m)
    assert rank(m.transpose()) == k
    assert rank(m.permuted(rp, cp)) == k


@settings(max_examples=30)
@given(matrices)
def test_modular_verification_agrees(data):
    r, c, v = data
    m = SparseMatrix.from_dense(dense(r, c, v)) if r and c else SparseMatrix(r, c)
    assert rank(m, verify_modular=True, seed=1) == rank_exact(m)


def test_modular_mismatch_is_hard_error(monkeypatch):
    monkeypatch.setattr(_kernels, "rank_mod", lambda a, p, backend=None: 0)
    with pytest.raises(ConsistencyError):
        rank(SparseMatrix.identity(3), verify_modular=True, seed=3)


def test_rank_mod_small_prime():
    m = SparseMatrix.from_dense([[1, 1], [1, 3]])
    assert rank_mod(m, 2) == 1
    assert rank_mod(m, 5) == 2


def test_random_primes():
    ps = linalg.random_primes(3, seed=11)
    assert len(set(ps)) == 3
    assert all(2 ** 30 <= p < 2 ** 31 and sympy.isprime(p) for p in ps)


def test_homology_single_generator():
    out = homology_dims({1: 1}, {})
    assert [(x.degree, x.homology_dim) for x in out] == [(1, 1)]


def test_homology_full_rank_square():
    out = homology_dims({0: 2, 1: 2}, {1: SparseMatrix.from_dense([[1, 2], [3, 4]])})
    assert [x.homology_dim for x in out] == [0, 0]
    assert out[1].rank_out == 2 and out[0].rank_in == 2


def test_homology_cochain_step():
    out = homology_dims({0: 1, 1: 1}, {0: SparseMatrix.from_dense([[1]])}, step=+1)
    assert [x.homology_dim for x in out] == [0, 0]


def test_d_squared_nonzero_raises():
    a = SparseMatrix.from_dense([[1]])
    with pytest.raises(ConsistencyError):
        homology_dims({0: 1, 1: 1, 2: 1}, {2: a, 1: a})


@given(st.randoms(use_true_random=False))
def test_homology_independent_of_basis_order(rnd):
    # a random complex C2 -> C1 -> C0 with d1 d2 = 0, built from a split
    n2, n1, n0 = 3, 5, 3
    d2 = [[rnd.randint(-2, 2) for _ in range(n2)] for _ in range(n1)]
    kernel_rows = sympy.Matrix(d2).T.nullspace()
    rows = [list(v.T) for v in kernel_rows][:n0]
    while len(rows) < n0:
        rows.append([0] * n1)
    d1 = [[int(x) if x == int(x) else x for x in r] for r in rows]
    A = SparseMatrix.from_dense(d1)
    B = SparseMatrix.from_dense(d2)
    base = [x.homology_dim for x in homology_dims({0: n0, 1: n1, 2: n2}, {1: A, 2: B})]
    p0, p1, p2 = list(range(n0)), list(range(n1)), list(range(n2))
    for p in (p0, p1, p2):
        rnd.shuffle(p)
    A2, B2 = A.permuted(p0, p1), B.permuted(p1, p2)
    assert [x.homology_dim for x in homology_dims({0: n0, 1: n1, 2: n2}, {1: A2, 2: B2})] == base


def test_solve_in_span_and_independent_subset():
    basis = [{0: Fraction(1), 1: Fraction(1)}, {1: Fraction(1)}]
    cols = solve_in_span(basis, [{0: Fraction(2), 1: Fraction(5)}, {}])
    assert cols == [{0: Fraction(2), 1: Fraction(3)}, {}]
    with pytest.raises(ConsistencyError):
        solve_in_span(basis, [{2: Fraction(1)}])
    assert independent_subset([{0: 1}, {0: 2}, {1: 1}, {0: 1, 1: 1}]) == [0, 2]


def test_numba_and_numpy_kernels_agree():
    import numpy as np
    rng = np.random.default_rng(5)
    p = 1000003
    for n in (1, 4, 9):
        a = rng.integers(0, 3, size=(n, n + 2), dtype=np.int64)
        assert _kernels.rank_mod(a, p, "numba") == _kernels.rank_mod(a, p, "numpy")


def test_env_flag_selects_numpy(monkeypatch):
    monkeypatch.setenv("HAIRYCALC_NO_NUMBA", "1")
    assert _kernels.numba_disabled()
    monkeypatch.setenv("HAIRYCALC_NO_NUMBA", "0")
    assert not _kernels.numba_disabled()
