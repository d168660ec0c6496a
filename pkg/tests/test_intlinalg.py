import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy import Matrix

from mackey_pic import intlinalg as il
from mackey_pic.errors import InvalidInputError


def matrices(max_rows=12, max_cols=12, lo=-20, hi=20):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def test_snf_identity():
    U, D, V = il.smith_normal_form(il.identity(3))
    assert il.equal(U, il.identity(3)) and il.equal(D, il.identity(3)) and il.equal(V, il.identity(3))


def test_snf_examples():
    _, D, _ = il.smith_normal_form([[2, 9]])
    assert D.tolist() == [[1, 0]]
    _, D, _ = il.smith_normal_form([[2, 0], [0, 3]])
    assert D.tolist() == [[1, 0], [0, 6]]


@given(matrices())
def test_snf_round_trip(rows):
    M = il.as_matrix(rows)
    U, D, V = il.smith_normal_form(M)
    assert il.equal(il.matmul(U, M, V), D)
    assert il.is_unimodular(U) and il.is_unimodular(V)
    # U^-1 D V^-1 reconstructs M
    assert il.equal(il.matmul(il.integer_inverse(U), D, il.integer_inverse(V)), M)
    diag = [int(D[i, i]) for i in range(min(D.shape))]
    off = D.copy()
    for i in range(len(diag)):
        off[i, i] = 0
    assert not np.any(off != 0)
    assert all(d >= 0 for d in diag)
    nz = [d for d in diag if d]
    assert diag[: len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


@given(matrices(6, 6, -9, 9))
def test_snf_matches_sympy_invariants(rows):
    from sympy.matrices.normalforms import invariant_factors
    from sympy import ZZ

    M = il.as_matrix(rows)
    _, D, _ = il.smith_normal_form(M)
    ours = [int(D[i, i]) for i in range(min(D.shape)) if D[i, i]]
    theirs = [abs(int(x)) for x in invariant_factors(Matrix(rows), domain=ZZ) if x]
    assert ours == theirs


def test_snf_is_deterministic():
    M = [[4, 6, 2], [6, 9, 3], [2, 3, 7]]
    a = il.smith_normal_form(M)
    b = il.smith_normal_form(M)
    assert all(il.equal(x, y) for x, y in zip(a, b))


def test_solve_examples():
    x, ker = il.solve(il.zeros(2, 3), [0, 0])
    assert list(x) == [0, 0, 0] and ker.rank == 3
    assert il.solve([[2]], [1]) is None
    x, ker = il.solve([[2, 1]], [0])
    assert ker.rank == 1
    v = ker.vectors()[0]
    assert list(v) in ([1, -2], [-1, 2])


def test_solve_dimension_mismatch():
    with pytest.raises(InvalidInputError):
        il.solve([[1, 2]], [1, 2])


@given(
    st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3),
    st.lists(st.integers(-6, 6), min_size=3, max_size=3),
)
def test_solve_agrees_with_box_search(rows, b):
    A = il.as_matrix(rows)
    sol = il.solve(A, b)
    box = [
        x for x in itertools.product(range(-4, 5), repeat=3) if list(il.matmul(A, il.as_matrix([[v] for v in x]))[:, 0]) == b
    ]
    if sol is None:
        assert not box
        return
    x0, ker = sol
    assert list(il.matmul(A, x0.reshape(-1, 1))[:, 0]) == b
    for K in ker.vectors():
        assert not np.any(il.matmul(A, K.reshape(-1, 1)) != 0)
    # every box solution differs from x0 by a kernel element
    for x in box:
        assert (il.as_vector(x) - x0) in ker


def test_unimodular_examples():
    assert il.is_unimodular([[1, 1], [0, 1]])
    assert il.integer_inverse([[1, 1], [0, 1]]).tolist() == [[1, -1], [0, 1]]
    assert not il.is_unimodular([[2]])
    assert il.integer_inverse([[2]]) is None
    assert il.is_unimodular([[2, 9], [1, 5]])
    with pytest.raises(InvalidInputError):
        il.is_unimodular([[1, 2]])


def test_cokernel_examples():
    assert il.cokernel_invariants(il.zeros(2, 0)) == [0, 0]
    assert il.cokernel_invariants([[5], [0]]) == [5, 0]
    assert il.cokernel_invariants(il.identity(3)) == []


@given(matrices(5, 5, -5, 5))
def test_cokernel_of_unimodular_is_trivial(rows):
    U, _, V = il.smith_normal_form(il.as_matrix(rows))
    assert il.cokernel_invariants(U) == [] and il.cokernel_invariants(V) == []


@given(matrices(6, 6, -9, 9))
def test_determinant_matches_sympy(rows):
    n = min(len(rows), len(rows[0]))
    sq = [r[:n] for r in rows[:n]]
    assert il.determinant(sq) == int(Matrix(sq).det())


@given(matrices(6, 8, -6, 6))
def test_kernel_is_saturated(rows):
    A = il.as_matrix(rows)
    K = il.kernel(A)
    assert K.rank == A.shape[1] - il.rank(A)
    for v in K.vectors():
        assert not np.any(il.matmul(A, v.reshape(-1, 1)) != 0)
    if K.rank:
        # saturation: the basis extends to a unimodular matrix, so the gcd of maximal minors is 1
        assert il.cokernel_invariants(K.basis.T) == [0] * (A.shape[1] - K.rank)


@given(matrices(6, 4, -3, 3))
def test_free_quotient(rows):
    S = il.as_matrix(rows)
    n = S.shape[0]
    try:
        P, L = il.free_quotient(S, n)
    except ValueError:
        assert any(il.cokernel_invariants(S))
        return
    assert not np.any(il.matmul(P, S) != 0)
    assert il.equal(il.matmul(P, L), il.identity(P.shape[0]))
    assert P.shape[0] == n - il.rank(S)
    # kernel of P is exactly the span of S
    for v in il.kernel(P).vectors():
        assert il.solve(S, v) is not None


def test_lattice_membership_and_reduction():
    L = il.Lattice(3, il.as_matrix([[1, 0, 3], [0, 2, 1]]))
    assert [1, 2, 4] in L
    assert [0, 1, 0] not in L
    R = L.reduced()
    assert R.same_lattice(L)
    c = L.coordinates([2, -2, 5])
    assert list(L.combination(c)) == [2, -2, 5]


def test_big_integers_are_exact():
    big = 10**30
    M = il.as_matrix([[big, 1], [0, big]])
    assert il.matmul(M, M)[0, 0] == big * big
    assert il.determinant(M) == big * big
