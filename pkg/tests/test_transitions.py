from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finitetype.errors import DimensionMismatch, NonConvergence, StructureViolation
from finitetype.transitions import (
    TransitionMatrix,
    check_structure,
    entry_sum_norm,
    max_row_sum,
    min_col_sum,
    min_row_sum,
    perron_bounds,
    product,
    spectral_radius,
    spectral_radius_exact,
)

from invariants import check_matrices, check_products


def self_matrix(omega, vid):
    """The matrix on the (first) self-edge of vertex ``vid``."""
    return next(ch.matrix for cid, ch in omega.edges[vid] if cid == vid)


def test_loop_class_matrices_of_r4_example(omega4):
    assert self_matrix(omega4, 1) == TransitionMatrix([[F(1, 164)]])
    assert self_matrix(omega4, 7) == TransitionMatrix([[2, 20], [0, 1]]).scale(F(1, 164))
    assert self_matrix(omega4, 8) == TransitionMatrix([[1, 0], [20, 2]]).scale(F(1, 164))
    assert self_matrix(omega4, 11) == TransitionMatrix([[F(1, 164)]])


def test_primitive_matrix_structure(omega4):
    assert check_matrices(omega4) == 60


def test_product_of_v8_loop():
    T = TransitionMatrix([[2, 20], [0, 1]]).scale(F(1, 164))
    assert product([T]) == T
    assert product([T, T]) == TransitionMatrix([[4, 60], [0, 1]]).scale(F(1, 164 ** 2))
    assert T ** 3 == T @ T @ T


def test_product_shape_errors():
    A = TransitionMatrix([[1, 2]])
    with pytest.raises(DimensionMismatch):
        product([A, A])
    with pytest.raises(DimensionMismatch):
        product([])
    with pytest.raises(DimensionMismatch):
        TransitionMatrix([[1], [1, 2]])


def test_norms_by_hand():
    T = TransitionMatrix([[2, 20], [0, 1]]).scale(F(1, 164))
    assert entry_sum_norm(T) == F(23, 164)
    assert min_row_sum(T) == F(1, 164)
    assert max_row_sum(T) == F(22, 164)
    assert min_col_sum(T) == F(2, 164)
    p = TransitionMatrix([[F(3, 7)]])
    assert entry_sum_norm(p) == min_row_sum(p) == F(3, 7)


def test_zero_row_is_a_structure_violation():
    with pytest.raises(StructureViolation):
        check_structure(TransitionMatrix([[1, 0], [0, 0]]))


def test_spectral_radius_exact_cases():
    T = TransitionMatrix([[2, 20], [0, 1]]).scale(F(1, 164))
    assert spectral_radius_exact(T) == F(2, 164)
    assert spectral_radius(T) == pytest.approx(2 / 164, rel=1e-15)
    assert spectral_radius(TransitionMatrix([[F(5, 9)]])) == pytest.approx(5 / 9)
    assert spectral_radius_exact(TransitionMatrix([[1, 1], [1, 1]])) is None


def test_permutation_matrix():
    assert spectral_radius(np.array([[0.0, 1.0], [1.0, 0.0]])) == pytest.approx(1.0)
    P = np.roll(np.eye(4), 1, axis=1)
    assert spectral_radius(P) == pytest.approx(1.0, rel=1e-12)


def test_non_square_rejected():
    with pytest.raises(DimensionMismatch):
        spectral_radius(TransitionMatrix([[1, 2]]))


def test_perron_bounds_enclose_and_can_fail():
    A = np.array([[1.0, 2.0, 0.0], [0.5, 1.0, 1.0], [1.0, 0.0, 2.0]])
    lo, hi = perron_bounds(A)
    rho = max(abs(np.linalg.eigvals(A)))
    assert lo <= rho + 1e-12 and rho <= hi + 1e-12
    with pytest.raises(NonConvergence):
        perron_bounds(A, tol=0.0, max_iter=3)


@settings(max_examples=200, deadline=None)
@given(st.integers(3, 6).flatmap(
    lambda n: st.lists(st.integers(0, 9), min_size=n * n, max_size=n * n).map(lambda v: (n, v))))
def test_spectral_radius_against_eigvals(args):
    n, vals = args
    A = np.array(vals, dtype=float).reshape(n, n)
    expected = max(abs(np.linalg.eigvals(A)))
    assert spectral_radius(A) == pytest.approx(expected, rel=1e-9, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 9), min_size=9, max_size=9), st.integers(1, 4))
def test_power_invariance(vals, k):
    A = np.array(vals, dtype=float).reshape(3, 3)
    rho = spectral_radius(A)
    assert spectral_radius(np.linalg.matrix_power(A, k)) == pytest.approx(rho ** k, rel=k * 1e-11)


def test_spectral_radius_below_norm(omega4):
    for _, _, _, M in omega4.edge_list():
        if M.shape[0] == M.shape[1]:
            assert spectral_radius(M) <= float(entry_sum_norm(M)) + 1e-15


def test_products_sub_and_supermultiplicative(omega4):
    assert check_products(omega4, np.random.default_rng(11)) == 1000


def test_integer_entries_must_be_exact():
    T = TransitionMatrix([[F(1, 3)]])
    assert T.integer_entries(6)[0, 0] == 2
    with pytest.raises(ValueError):
        T.integer_entries(2)
