"""Exact optimal layouts and certificates for the coverage problem.

The first-order conditions for minimizing the gap energy force the interior
mass gaps to be equal with half-gaps at the two boundaries, so the optimal
layout places agent i at the position holding cumulative mass
``(2i - 1) * total / (2n)``.  This module solves those conditions through
antiderivative inversion and exposes the balance residuals as an independent
certificate, plus a numeric check of the gradient-dominance inequality
``|grad|^2 / (energy - optimum) >= 4 / n^2`` that underpins the protocol's
convergence rate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density import DensityField
from .metrics import (
    coverage_radius,
    gap_energy,
    gap_energy_gradient,
    mass_gaps,
    validate_positions,
)

__all__ = [
    "optimal_positions",
    "optimal_coverage_radius",
    "balance_residuals",
    "gradient_dominance",
    "certify_optimal",
    "OptimalityReport",
    "DominanceResult",
]

#: Energy differences below this are treated as "at the optimum" and skipped
#: by the gradient-dominance check (the ratio degenerates to 0/0 there).
OPTIMUM_ENERGY_SLACK = 1e-12


@dataclass(frozen=True)
class OptimalityReport:
    """Optimal layout with its coverage radius and balance residuals."""

    positions: np.ndarray
    coverage: float
    residuals: np.ndarray
    tol: float


@dataclass(frozen=True)
class DominanceResult:
    """Outcome of the gradient-dominance check at one layout."""

    ratio: float
    bound: float
    passed: bool
    at_optimum: bool


def optimal_positions(field: DensityField, n: int, tol: float = 1e-12) -> np.ndarray:
    """Layout minimizing the coverage radius (and the gap energy).

    Positions are recovered by inverting the cumulative mass at the
    equal-gap targets; each inversion is accurate to ``tol`` in mass.
    """
    if n < 1:
        raise ValueError("need at least one agent")
    total = field.total_mass
    targets = (2.0 * np.arange(1, n + 1) - 1.0) * total / (2.0 * n)
    x = np.array([field.inverse_mass(y, tol) for y in targets])
    if np.any(np.diff(x) <= 0.0):
        raise ArithmeticError("inverted optimal positions are not strictly increasing")
    return x


def optimal_coverage_radius(field: DensityField, n: int) -> float:
    """Best achievable coverage radius: total mass over 2n."""
    if n < 1:
        raise ValueError("need at least one agent")
    return field.total_mass / (2.0 * n)


def balance_residuals(positions, field: DensityField) -> np.ndarray:
    """First-order balance conditions evaluated at a layout.

    Residual k compares agent k's left and right mass gap, with the boundary
    gaps entering doubled: the first residual is ``2*left - right``, interior
    residuals are ``left - right``, the last is ``left - 2*right``, and a
    single agent balances ``2*left - 2*right``.  All residuals vanish exactly
    at the optimal layout.
    """
    x = validate_positions(positions)
    gaps = mass_gaps(x, field)
    if x.size == 1:
        return np.array([2.0 * gaps[0] - 2.0 * gaps[1]])
    res = gaps[:-1] - gaps[1:]
    res[0] = 2.0 * gaps[0] - gaps[1]
    res[-1] = gaps[-2] - 2.0 * gaps[-1]
    return res


def gradient_dominance(positions, field: DensityField) -> DominanceResult:
    """Check ``|grad|^2 / (energy - optimum) >= 4 / n^2`` at a layout.

    Layouts within ``OPTIMUM_ENERGY_SLACK`` of the optimal energy are
    reported as ``at_optimum`` with an undefined ratio instead of risking a
    0/0 blowup.
    """
    x = validate_positions(positions)
    n = x.size
    bound = 4.0 / (n * n)
    x_star = optimal_positions(field, n)
    excess = gap_energy(x, field) - gap_energy(x_star, field)
    if excess < OPTIMUM_ENERGY_SLACK:
        return DominanceResult(ratio=float("nan"), bound=bound, passed=True, at_optimum=True)
    g = gap_energy_gradient(x, field)
    ratio = float(np.dot(g, g) / excess)
    return DominanceResult(ratio=ratio, bound=bound, passed=ratio >= bound, at_optimum=False)


def certify_optimal(field: DensityField, n: int, tol: float = 1e-9) -> OptimalityReport:
    """Optimal layout together with a residual certificate.

    Inversion runs at ``tol / 8`` so the residuals, each a combination of a
    few inverted masses, land within ``tol``.
    """
    x = optimal_positions(field, n, tol=tol / 8.0)
    residuals = balance_residuals(x, field)
    worst = float(np.max(np.abs(residuals)))
    if worst > tol:
        raise ArithmeticError(f"optimality residual {worst:.3e} exceeds tol {tol:.3e}")
    return OptimalityReport(
        positions=x,
        coverage=coverage_radius(x, field),
        residuals=residuals,
        tol=tol,
    )
