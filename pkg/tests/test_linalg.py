import pytest
from hypothesis import given, settings, strategies as st

from oracles import matrix_rank
from stackwalk.linalg import (
    F2,
    QQ,
    FieldSpec,
    SparseMatrix,
    kernel_basis,
    rank,
    rank_dense_reference,
)

F3, F5 = FieldSpec(3), FieldSpec(5)


def test_identity_rank():
    assert rank(SparseMatrix.from_dense([[1, 0, 0], [0, 1, 0], [0, 0, 1]]), F2) == 3


def test_all_ones():
    m = SparseMatrix.from_dense([[1, 1], [1, 1]])
    assert rank(m, F2) == 1 and rank(m, QQ) == 1


def test_characteristic_matters():
    m = SparseMatrix.from_dense([[2]])
    assert rank(m, F2) == 0 and rank(m, QQ) == 1


def test_kernel_examples():
    assert len(kernel_basis(SparseMatrix(2, 3), QQ)) == 3
    assert kernel_basis(SparseMatrix.from_dense([[1, 0], [0, 1]]), QQ) == []
    # boundary from the 3 edges of a triangle to its 3 vertices, edges as columns
    d1 = SparseMatrix.from_dense([[-1, -1, 0], [1, 0, -1], [0, 1, 1]])
    ker = kernel_basis(d1, QQ)
    assert rank(d1, QQ) == 2 and len(ker) == 1


def test_fieldspec_validation():
    with pytest.raises(ValueError):
        FieldSpec(4)
    assert FieldSpec.parse("0") == QQ and FieldSpec.parse("F2") == F2
    assert str(QQ) == "Q" and str(F3) == "F3"


def test_sparse_matrix_invariants():
    with pytest.raises(IndexError):
        SparseMatrix(2, 2, {(0, 5): 1})
    m = SparseMatrix(2, 2, {(0, 0): 0, (1, 1): 3})
    assert m.entries == {(1, 1): 3}
    assert m.transpose().to_dense() == [[0, 0], [0, 3]]


matrices = st.integers(1, 7).flatmap(
    lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c),
                       min_size=1, max_size=7))


@given(matrices, st.sampled_from([F2, F3, F5, QQ]))
@settings(max_examples=150)
def test_rank_matches_sympy(dense, field):
    p = field.characteristic
    ours = rank(SparseMatrix.from_dense(dense), field)
    assert ours == matrix_rank(dense, len(dense[0]), p)
    assert ours == rank_dense_reference(dense, field)


@given(matrices, st.sampled_from([F2, F3, QQ]))
@settings(max_examples=100)
def test_rank_nullity(dense, field):
    m = SparseMatrix.from_dense(dense)
    ker = kernel_basis(m, field)
    assert rank(m, field) + len(ker) == m.cols
    p = field.characteristic
    for v in ker:
        for row in dense:
            s = sum(a * b for a, b in zip(row, v))
            assert (s % p == 0) if p else s == 0


@given(matrices, st.sampled_from([2, 3, 5, 7]))
def test_prime_rank_bounded_by_rational(dense, p):
    m = SparseMatrix.from_dense(dense)
    assert rank(m, FieldSpec(p)) <= rank(m, QQ)
