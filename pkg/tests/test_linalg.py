"""QQ 上的零空间与逆"""
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import Matrix, Rational

from src.engine import linalg


def test_nullspace_is_unit_on_free_columns():
    M = Matrix([[1, 1, 0, 2], [0, 0, 1, 3]])
    basis = linalg.nullspace(M)
    assert basis == [Matrix([-1, 1, 0, 0]), Matrix([-2, 0, -3, 1])]


def test_nullspace_edge_shapes():
    assert linalg.nullspace(Matrix.eye(3)) == []
    assert linalg.nullspace(Matrix.zeros(0, 2)) == [Matrix([1, 0]), Matrix([0, 1])]
    assert linalg.nullspace(Matrix.zeros(2, 2)) == [Matrix([1, 0]), Matrix([0, 1])]


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=3))
def test_nullspace_vectors_are_killed(rows):
    M = Matrix(rows)
    basis = linalg.nullspace(M)
    assert len(basis) == M.cols - linalg.rank(M)
    for v in basis:
        assert linalg.is_zero(M * v)


def test_inverse():
    M = Matrix([[2, 1], [1, 1]])
    assert linalg.inverse(M) == Matrix([[1, -1], [-1, 2]])
    assert linalg.inverse(Matrix([[Rational(1, 2)]])) == Matrix([[2]])
    assert linalg.inverse(Matrix.zeros(0, 0)) == Matrix.zeros(0, 0)


def test_singular_matrix_has_no_inverse():
    with pytest.raises(ValueError):
        linalg.inverse(Matrix([[1, 2], [2, 4]]))
