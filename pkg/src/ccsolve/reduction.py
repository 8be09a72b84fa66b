"""Orthogonal reduction of dense systems to banded form.

A symmetric matrix is reduced by Householder similarity to tridiagonal form
C3 = Q^T A Q with rhs Q^T f; a general matrix by two-sided Householder
reflections to upper-bidiagonal form C2 = P A Q with rhs P f.  The factors
are accumulated as explicit dense orthogonal matrices, the solution of the
banded system is mapped back with z = Q x, and the truncation of the
reduced matrix to its bands is covered by an explicit error budget
(h2 for the matrix, delta2 for the rhs).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bidiagonal import CCBidiagonalSolution, solve_cc_bidiagonal
from .matrices import (
    BidiagonalMatrix,
    DEFAULT_PRECISION,
    DenseMatrix,
    Precision,
    TridiagonalMatrix,
    frobenius_norm,
    norm_inf,
)
from .tridiagonal import CCSolution, ErrorBudget, solve_cc_tridiagonal

__all__ = [
    "DenseSolveDiagnostics",
    "ReductionResult",
    "backmap",
    "is_symmetric",
    "reduce_general",
    "reduce_symmetric",
    "reduction_error_budget",
    "solve_dense",
]

SYMMETRY_RTOL = 1e-12


@dataclass
class ReductionResult:
    """Banded form of a dense system: the band matrix, the transformed
    right-hand side, the backmap factor Q (z = Q x), the left factor P for
    the bidiagonal route, and the truncation error budget."""

    form: str
    matrix: TridiagonalMatrix | BidiagonalMatrix
    rhs: np.ndarray
    q_factor: np.ndarray
    p_factor: np.ndarray | None
    budget: ErrorBudget


def is_symmetric(a: DenseMatrix) -> bool:
    """True when max|a_ij - a_ji| <= 1e-12 * norm_inf(a)."""
    return float(np.max(np.abs(a.a - a.a.T))) <= SYMMETRY_RTOL * norm_inf(a)


def _reflector(x: np.ndarray) -> np.ndarray | None:
    """Unit Householder vector annihilating x[1:], or None when x[1:] is
    already exactly zero (no reflection applied)."""
    if float(np.linalg.norm(x[1:])) == 0.0:
        return None
    alpha = -float(np.copysign(np.linalg.norm(x), x[0]))
    v = x.astype(float).copy()
    v[0] -= alpha
    v /= np.linalg.norm(v)
    return v


def _budget_formula(m, norm_a, norm_f, prec, route) -> ErrorBudget:
    eps_r = 29.0 * prec.eps1
    zero_r = (2.0 * m + 2.0 * np.sqrt(m)) * prec.eps0
    if route == "bidiagonal":
        count = 2.0 * m - 3.0
        den = 1.0 - (m - 2.0) * eps_r
    elif route == "tridiagonal":
        count = 2.0 * m - 4.0
        den = 1.0 - (m - 2.5) * eps_r
    else:
        raise ValueError(f"unknown route {route!r}")
    if den <= 0.0:
        raise ValueError(f"order {m} too large for the error-budget formula")
    h2 = count * eps_r / den * norm_a + count * np.sqrt(m) * zero_r / den
    delta2 = eps_r * norm_f + zero_r
    return ErrorBudget(h=h2, delta=delta2, h2=h2, delta2=delta2)


def reduction_error_budget(
    m: int,
    norm_a: float,
    norm_f: float,
    prec: Precision = DEFAULT_PRECISION,
    route: str = "bidiagonal",
) -> ErrorBudget:
    """Truncation budget of the orthogonal reduction: h2 bounds the Euclidean
    distance between the computed band matrix and an exact orthogonal
    transform of the input, delta2 the same for the right-hand side."""
    if m < 3:
        raise ValueError("the error-budget formulas require m >= 3")
    return _budget_formula(m, norm_a, norm_f, prec, route)


def _route_budget(m, norm_a, norm_f, prec, route) -> ErrorBudget:
    if m < 2:
        return ErrorBudget()
    return _budget_formula(m, norm_a, norm_f, prec, route)


def reduce_symmetric(
    a: DenseMatrix, f, prec: Precision = DEFAULT_PRECISION
) -> ReductionResult:
    """Householder similarity reduction of a symmetric matrix to tridiagonal
    form; raises ValueError on a matrix that is not symmetric within
    1e-12 * norm_inf."""
    if not is_symmetric(a):
        raise ValueError("matrix is not symmetric within tolerance")
    m = a.m
    f = np.asarray(f, dtype=float)
    if f.shape != (m,):
        raise ValueError(f"f must have length {m}")
    arr = a.a.copy()
    q_factor = np.eye(m)
    for k in range(m - 2):
        tail = _reflector(arr[k + 1 :, k].copy())
        if tail is None:
            continue
        v = np.zeros(m)
        v[k + 1 :] = tail
        arr -= 2.0 * np.outer(v, v @ arr)
        arr -= 2.0 * np.outer(arr @ v, v)
        q_factor -= 2.0 * np.outer(q_factor @ v, v)
    c3 = TridiagonalMatrix(
        np.diag(arr).copy(), np.diag(arr, -1).copy(), np.diag(arr, 1).copy()
    )
    budget = _route_budget(
        m, frobenius_norm(a), float(np.linalg.norm(f)), prec, "tridiagonal"
    )
    return ReductionResult(
        form="tridiagonal",
        matrix=c3,
        rhs=q_factor.T @ f,
        q_factor=q_factor,
        p_factor=None,
        budget=budget,
    )


def reduce_general(
    a: DenseMatrix, f, prec: Precision = DEFAULT_PRECISION
) -> ReductionResult:
    """Two-sided Householder reduction of a square matrix to upper-bidiagonal
    form C2 = P A Q with rhs P f."""
    m = a.m
    f = np.asarray(f, dtype=float)
    if f.shape != (m,):
        raise ValueError(f"f must have length {m}")
    arr = a.a.copy()
    p_factor = np.eye(m)
    q_factor = np.eye(m)
    for k in range(m - 1):
        tail = _reflector(arr[k:, k].copy())
        if tail is not None:
            v = np.zeros(m)
            v[k:] = tail
            arr -= 2.0 * np.outer(v, v @ arr)
            p_factor -= 2.0 * np.outer(v, v @ p_factor)
        if k <= m - 3:
            tail = _reflector(arr[k, k + 1 :].copy())
            if tail is None:
                continue
            v = np.zeros(m)
            v[k + 1 :] = tail
            arr -= 2.0 * np.outer(arr @ v, v)
            q_factor -= 2.0 * np.outer(q_factor @ v, v)
    c2 = BidiagonalMatrix(np.diag(arr).copy(), np.diag(arr, 1).copy())
    budget = _route_budget(
        m, frobenius_norm(a), float(np.linalg.norm(f)), prec, "bidiagonal"
    )
    return ReductionResult(
        form="bidiagonal",
        matrix=c2,
        rhs=p_factor @ f,
        q_factor=q_factor,
        p_factor=p_factor,
        budget=budget,
    )


def backmap(q_factor: np.ndarray, x) -> np.ndarray:
    """Map a banded-system solution back to the original variables: Q x."""
    return q_factor @ np.asarray(x, dtype=float)


@dataclass
class DenseSolveDiagnostics:
    """What the dense pipeline did: the route taken, the reduction (with its
    error budget), and the inner banded solution (with its residual bound)."""

    route: str
    reduction: ReductionResult
    inner: CCSolution | CCBidiagonalSolution


def solve_dense(
    a: DenseMatrix,
    f,
    prec: Precision = DEFAULT_PRECISION,
    *,
    route: str | None = None,
    phi_threshold: float | None = None,
    growth_threshold: float | None = None,
) -> tuple[np.ndarray, DenseSolveDiagnostics]:
    """Solve a dense system by orthogonal reduction to banded form.

    route None picks "symmetric" (tridiagonal reduction) when the matrix is
    symmetric within tolerance and "general" (bidiagonal reduction)
    otherwise; passing "symmetric" or "general" overrides the detection.
    """
    if route is None:
        route = "symmetric" if is_symmetric(a) else "general"
    if route == "symmetric":
        reduction = reduce_symmetric(a, f, prec)
        inner = solve_cc_tridiagonal(
            reduction.matrix,
            reduction.rhs,
            prec,
            phi_threshold=phi_threshold,
            growth_threshold=growth_threshold,
        )
    elif route == "general":
        reduction = reduce_general(a, f, prec)
        inner = solve_cc_bidiagonal(
            reduction.matrix,
            reduction.rhs,
            prec,
            phi_threshold=phi_threshold,
            growth_threshold=growth_threshold,
        )
    else:
        raise ValueError(f"unknown route {route!r}")
    z = backmap(reduction.q_factor, inner.x_plus)
    return z, DenseSolveDiagnostics(route=route, reduction=reduction, inner=inner)
