"""Tests for the orthogonal reductions to banded form."""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from ccsolve.matrices import (
    BidiagonalMatrix,
    DenseMatrix,
    TridiagonalMatrix,
    dense_array,
    matvec,
)
from ccsolve.reduction import (
    backmap,
    is_symmetric,
    reduce_general,
    reduce_symmetric,
    reduction_error_budget,
    solve_dense,
)

EPS1 = 2.0 ** -52


def random_symmetric(rng, m):
    a = rng.standard_normal((m, m))
    return DenseMatrix(a + a.T)


def test_is_symmetric_detection():
    rng = np.random.default_rng(601)
    assert is_symmetric(random_symmetric(rng, 6))
    a = rng.standard_normal((6, 6))
    a[0, 5] += 1.0
    assert not is_symmetric(DenseMatrix(a + a.T + np.triu(np.ones((6, 6)), 5)))


def test_symmetric_reduction_produces_tridiagonal():
    rng = np.random.default_rng(602)
    for _ in range(20):
        m = int(rng.integers(3, 33))
        a = random_symmetric(rng, m)
        f = rng.standard_normal(m)
        red = reduce_symmetric(a, f)
        assert red.form == "tridiagonal"
        assert isinstance(red.matrix, TridiagonalMatrix)
        # Q^T A Q = C within rounding
        qmat = red.q_factor
        c = dense_array(red.matrix)
        assert_allclose(qmat.T @ a.a @ qmat, c, rtol=0,
                        atol=1e-12 * max(1.0, np.max(np.abs(a.a))) * m)
        assert_allclose(red.rhs, qmat.T @ f, rtol=0, atol=1e-12 * max(1.0, np.max(np.abs(f))))


def test_general_reduction_produces_bidiagonal():
    rng = np.random.default_rng(603)
    for _ in range(20):
        m = int(rng.integers(3, 33))
        a = DenseMatrix(rng.standard_normal((m, m)))
        f = rng.standard_normal(m)
        red = reduce_general(a, f)
        assert red.form == "bidiagonal"
        assert isinstance(red.matrix, BidiagonalMatrix)
        # P A Q = C within rounding
        c = dense_array(red.matrix)
        assert_allclose(red.p_factor @ a.a @ red.q_factor, c, rtol=0,
                        atol=1e-12 * max(1.0, np.max(np.abs(a.a))) * m)
        assert_allclose(red.rhs, red.p_factor @ f, rtol=0,
                        atol=1e-12 * max(1.0, np.max(np.abs(f))))


def test_factor_orthogonality():
    rng = np.random.default_rng(604)
    for _ in range(20):
        m = int(rng.integers(3, 33))
        a = DenseMatrix(rng.standard_normal((m, m)))
        red = reduce_general(a, rng.standard_normal(m))
        for qmat in (red.p_factor, red.q_factor):
            assert np.max(np.abs(qmat.T @ qmat - np.eye(m))) <= 10 * m * m * EPS1
        red2 = reduce_symmetric(random_symmetric(rng, m), rng.standard_normal(m))
        assert np.max(np.abs(red2.q_factor.T @ red2.q_factor - np.eye(m))) <= 10 * m * m * EPS1


def test_frobenius_norm_invariance_within_budget():
    rng = np.random.default_rng(605)
    for _ in range(20):
        m = int(rng.integers(3, 33))
        arr = rng.standard_normal((m, m))
        red = reduce_general(DenseMatrix(arr), rng.standard_normal(m))
        drift = abs(np.linalg.norm(dense_array(red.matrix), "fro")
                    - np.linalg.norm(arr, "fro"))
        assert drift <= red.budget.h2


def test_singular_values_preserved():
    rng = np.random.default_rng(606)
    for _ in range(20):
        m = int(rng.integers(3, 33))
        arr = rng.standard_normal((m, m))
        red = reduce_general(DenseMatrix(arr), rng.standard_normal(m))
        sa = np.linalg.svd(arr, compute_uv=False)
        sc = np.linalg.svd(dense_array(red.matrix), compute_uv=False)
        assert np.max(np.abs(sa - sc)) <= 1e-10 * sa[0]


def test_eigenvalues_preserved_symmetric():
    # The all-ones matrix has eigenvalues {3, 0, 0}.
    a = DenseMatrix(np.ones((3, 3)))
    red = reduce_symmetric(a, np.zeros(3))
    eigs = np.sort(np.linalg.eigvalsh(dense_array(red.matrix)))
    assert_allclose(eigs, [0.0, 0.0, 3.0], rtol=0, atol=1e-12)


def test_already_banded_input_gets_identity_factors():
    # A matrix that is already tridiagonal needs no reflectors at all.
    arr = np.diag(np.arange(1.0, 6.0))
    arr += np.diag(np.ones(4), 1) + np.diag(np.ones(4), -1)
    red = reduce_symmetric(DenseMatrix(arr), np.arange(5.0))
    assert_array_equal(red.q_factor, np.eye(5))
    assert_array_equal(dense_array(red.matrix), arr)


def test_budget_reference_value_and_validation():
    # Bidiagonal route at m=3, unit Frobenius norm: 3 reflector applications
    # at 29*eps1 each, barely above 87*eps1.
    budget = reduction_error_budget(3, 1.0, 1.0, route="bidiagonal")
    assert_allclose(budget.h2, 87.0 * EPS1, rtol=1e-10)
    budget_t = reduction_error_budget(3, 1.0, 1.0, route="tridiagonal")
    assert_allclose(budget_t.h2, 58.0 * EPS1, rtol=1e-10)
    assert budget.delta2 >= 29.0 * EPS1
    with pytest.raises(ValueError):
        reduction_error_budget(2, 1.0, 1.0)
    with pytest.raises(ValueError):
        reduction_error_budget(4, 1.0, 1.0, route="hexagonal")


def test_backmap_applies_orthogonal_factor():
    rng = np.random.default_rng(607)
    qmat, _ = np.linalg.qr(rng.standard_normal((6, 6)))
    x = rng.standard_normal(6)
    assert_allclose(backmap(qmat, x), qmat @ x, rtol=1e-14)


def test_solve_dense_symmetric_route():
    rng = np.random.default_rng(608)
    for _ in range(10):
        m = int(rng.integers(3, 20))
        a = random_symmetric(rng, m)
        a.a[np.diag_indices(m)] += m * 4.0
        x = rng.standard_normal(m)
        y = a.a @ x
        z, diag = solve_dense(a, y)
        assert diag.route == "symmetric"
        assert np.linalg.norm(z - x) / np.linalg.norm(x) <= 1e-10


def test_solve_dense_general_route():
    rng = np.random.default_rng(609)
    for _ in range(10):
        m = int(rng.integers(3, 20))
        arr = rng.standard_normal((m, m)) + np.eye(m) * m * 2.0
        x = rng.standard_normal(m)
        y = arr @ x
        z, diag = solve_dense(DenseMatrix(arr), y)
        assert diag.route == "general"
        assert np.linalg.norm(z - x) / np.linalg.norm(x) <= 1e-10


def test_solve_dense_route_override():
    rng = np.random.default_rng(610)
    a = random_symmetric(rng, 6)
    a.a[np.diag_indices(6)] += 20.0
    x = rng.standard_normal(6)
    y = a.a @ x
    z, diag = solve_dense(a, y, route="general")
    assert diag.route == "general"
    assert np.linalg.norm(z - x) / np.linalg.norm(x) <= 1e-10
    with pytest.raises(ValueError):
        solve_dense(a, y, route="sideways")
