"""Block-separation solver specialized to upper-bidiagonal systems.

An upper-bidiagonal matrix is the p = 0 case of the tridiagonal solver: the
left structure elements vanish, every block inverse is upper triangular, and
for a nonsingular well-posed matrix the whole procedure reduces to back
substitution.  The residual bound keeps the same shape with the band factor
tau_hat = max|r_i| and the partition factor gamma_hat = sqrt(m/2).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .matrices import (
    BidiagonalMatrix,
    DEFAULT_PRECISION,
    DenseMatrix,
    Precision,
    TridiagonalMatrix,
)
from .tridiagonal import (
    BlockPartition,
    ErrorBudget,
    ResidualBound,
    SolveFlags,
    rounding_budget,
    solve_cc_tridiagonal,
)

__all__ = [
    "CCBidiagonalSolution",
    "pseudo_inverse_bidiagonal",
    "residual_bound_bidiagonal",
    "solve_cc_bidiagonal",
]


@dataclass
class CCBidiagonalSolution:
    """Solution of an upper-bidiagonal system, with the block partition, the
    largest inverse magnitude rho_hat, and the hatted residual bound."""

    x_plus: np.ndarray
    x_regular: np.ndarray
    phi: np.ndarray
    partition: BlockPartition
    rho_hat: float
    bound: ResidualBound
    flags: SolveFlags
    events: list = field(default_factory=list)


def _as_tridiagonal(c2: BidiagonalMatrix) -> TridiagonalMatrix:
    return TridiagonalMatrix(c2.q, np.zeros(max(c2.m - 1, 0)), c2.r)


def _gamma_hat(partition: BlockPartition) -> float:
    """sqrt((1/2)*sum_k (l_k - l_{k+1})) with l_{n+1} = 0; the sum
    telescopes to the order m."""
    bounds = partition.boundaries + (0,)
    total = sum(bounds[k] - bounds[k + 1] for k in range(partition.n))
    return float(np.sqrt(0.5 * total))


def _build_bound(c2, partition, rho_hat, max_y, x_plus, budget, prec) -> ResidualBound:
    tau_hat = float(np.max(np.abs(c2.r))) if c2.m > 1 else 0.0
    gamma_hat = _gamma_hat(partition)
    delta = budget.h * float(np.max(np.abs(x_plus))) + budget.delta
    value = prec.eps1 * tau_hat * rho_hat * gamma_hat * max_y + delta
    return ResidualBound(tau_hat, rho_hat, gamma_hat, max_y, delta, value)


def residual_bound_bidiagonal(
    c2: BidiagonalMatrix,
    solution: CCBidiagonalSolution,
    budget: ErrorBudget,
    prec: Precision = DEFAULT_PRECISION,
) -> ResidualBound:
    """Residual bound of a computed solution under a caller-supplied budget;
    with r = 0 the bound degenerates to the delta term alone."""
    return _build_bound(
        c2,
        solution.partition,
        solution.rho_hat,
        solution.bound.max_y,
        solution.x_plus,
        budget,
        prec,
    )


def solve_cc_bidiagonal(
    c2: BidiagonalMatrix,
    y,
    prec: Precision = DEFAULT_PRECISION,
    *,
    phi_threshold: float | None = None,
    growth_threshold: float | None = None,
) -> CCBidiagonalSolution:
    """Solve C2 x = y by block separation (the p = 0 tridiagonal path)."""
    inner = solve_cc_tridiagonal(
        _as_tridiagonal(c2),
        y,
        prec,
        phi_threshold=phi_threshold,
        growth_threshold=growth_threshold,
    )
    max_y = inner.bound.max_y
    bound = _build_bound(
        c2,
        inner.partition,
        inner.rho,
        max_y,
        inner.x_plus,
        rounding_budget(c2, y, prec),
        prec,
    )
    return CCBidiagonalSolution(
        x_plus=inner.x_plus,
        x_regular=inner.x_regular,
        phi=inner.phi,
        partition=inner.partition,
        rho_hat=inner.rho,
        bound=bound,
        flags=inner.flags,
        events=inner.events,
    )


def pseudo_inverse_bidiagonal(
    c2: BidiagonalMatrix,
    prec: Precision = DEFAULT_PRECISION,
    *,
    phi_threshold: float | None = None,
    growth_threshold: float | None = None,
) -> DenseMatrix:
    """Pseudo-inverse assembled column by column; upper triangular for a
    nonsingular well-posed matrix."""
    m = c2.m
    result = np.zeros((m, m))
    for j in range(m):
        e_j = np.zeros(m)
        e_j[j] = 1.0
        solution = solve_cc_bidiagonal(
            c2,
            e_j,
            prec,
            phi_threshold=phi_threshold,
            growth_threshold=growth_threshold,
        )
        result[:, j] = solution.x_plus
    return DenseMatrix(result)
