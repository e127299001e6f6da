"""Coverage and energy diagnostics for ordered agent layouts.

An agent layout is a nondecreasing vector of ``n`` positions in [0, 1];
virtual anchors at 0 and 1 bound the first and last gap.  Two scalar
diagnostics drive everything:

* the coverage radius, the largest density-weighted distance from any point
  of the interval to its nearest agent (smaller is better), and
* the gap energy, the sum of squared mass gaps between neighbors with the
  two boundary gaps double-weighted.  The sampling protocol performs
  stochastic gradient descent on this energy, and its unique minimizer is
  exactly the optimal-coverage layout.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .density import DensityField

__all__ = [
    "validate_positions",
    "coverage_radius",
    "coverage_radius_grid",
    "gap_energy",
    "gap_energy_gradient",
    "mass_hessian_min_eig",
    "boundary_coefficients",
    "mass_gaps",
]


def validate_positions(positions) -> np.ndarray:
    """Return positions as a float array, rejecting invalid layouts.

    A valid layout has n >= 1 finite entries, nondecreasing, within [0, 1].
    """
    x = np.asarray(positions, dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise ValueError("positions must be a 1-d vector with at least one entry")
    if not np.all(np.isfinite(x)):
        raise ValueError("positions must be finite")
    if x[0] < 0.0 or x[-1] > 1.0:
        raise ValueError("positions must lie in [0, 1]")
    if np.any(np.diff(x) < 0.0):
        raise ValueError("positions must be nondecreasing")
    return x


def mass_gaps(positions: np.ndarray, field: DensityField) -> np.ndarray:
    """The n+1 cumulative-mass gaps between consecutive agents and anchors."""
    fx = np.atleast_1d(field.mass(positions))
    bounds = np.concatenate(([0.0], fx, [field.total_mass]))
    return np.diff(bounds)


def boundary_coefficients(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Left/right gap weights (4 at the doubled boundary, 2 elsewhere).

    These are the coefficients with which the energy gradient (and the
    protocol's gradient estimate) combines the left and right gap of each
    agent.  For a single agent both boundaries collapse onto it, so both
    weights are 4.
    """
    if n < 1:
        raise ValueError("need at least one agent")
    cl = np.full(n, 2.0)
    cr = np.full(n, 2.0)
    cl[0] = 4.0
    cr[-1] = 4.0
    return cl, cr


def coverage_radius(positions, field: DensityField) -> float:
    """Worst-case weighted distance from any point to its nearest agent.

    In mass coordinates the farthest point of each interior gap is its
    midpoint, so the radius is the maximum of the first gap, half of each
    interior gap, and the last gap.  ``coverage_radius_grid`` checks the
    same quantity by brute force.
    """
    x = validate_positions(positions)
    gaps = mass_gaps(x, field)
    interior = 0.5 * gaps[1:-1].max() if x.size >= 2 else 0.0
    return float(max(gaps[0], interior, gaps[-1]))


def coverage_radius_grid(positions, field: DensityField, grid_size: int = 10_001) -> float:
    """Brute-force coverage radius over a uniform grid of candidate points."""
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    x = validate_positions(positions)
    fy = field.mass(np.linspace(0.0, 1.0, grid_size))
    fx = np.atleast_1d(field.mass(x))
    nearest = np.min(np.abs(fy[:, None] - fx[None, :]), axis=1)
    return float(nearest.max())


def gap_energy(positions, field: DensityField) -> float:
    """Sum of squared mass gaps, boundary gaps doubled."""
    x = validate_positions(positions)
    gaps = mass_gaps(x, field)
    w = np.ones_like(gaps)
    w[0] = w[-1] = 2.0
    return float(np.dot(w, gaps * gaps))


def gap_energy_gradient(positions, field: DensityField) -> np.ndarray:
    """Exact gradient of the gap energy with respect to the positions.

    Component k is ``rho(x_k) * (cl_k * leftgap_k - cr_k * rightgap_k)`` in
    mass-gap terms, with the boundary coefficients of
    ``boundary_coefficients``.
    """
    x = validate_positions(positions)
    gaps = mass_gaps(x, field)
    cl, cr = boundary_coefficients(x.size)
    rho = np.atleast_1d(field.density(x))
    return rho * (cl * gaps[:-1] - cr * gaps[1:])


def mass_hessian_min_eig(n: int) -> float:
    """Smallest eigenvalue of the energy Hessian in mass coordinates.

    In cumulative-mass coordinates the gap energy is a fixed quadratic whose
    Hessian is tridiagonal with diagonal (6, 4, ..., 4, 6) and off-diagonal
    -2; for a single agent the quadratic is 2y^2 + 2(total - y)^2, with
    second derivative 8.  The eigenvalue is computed by a direct symmetric
    tridiagonal solve and is bounded below by 2 / n^2.
    """
    if n < 1:
        raise ValueError("need at least one agent")
    if n == 1:
        return 8.0
    d = np.full(n, 4.0)
    d[0] = d[-1] = 6.0
    e = np.full(n - 1, -2.0)
    return float(eigvalsh_tridiagonal(d, e, select="i", select_range=(0, 0))[0])
