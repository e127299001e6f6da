"""Density fields on the unit interval.

A density field is a positive weight profile ``rho`` on [0, 1], normalized so
that ``rho >= 1`` everywhere.  It induces a weighted distance between two
points, namely the integral of ``rho`` between them, which stretches regions
of high density relative to regions of low density.  Everything downstream
(coverage radii, gap energies, the sampling protocol) is phrased in terms of
the cumulative mass ``F(z) = integral of rho from 0 to z``, so each family
carries an exact, vectorized ``mass`` implementation alongside pointwise
evaluation.

Four families are provided: constant, affine, piecewise-linear, and a smooth
Gaussian bump.  Each family knows its exact supremum ``density_max`` and the
supremum of ``|rho'|`` (``slope_max``); both may be overridden at construction
to exercise validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import erf

__all__ = [
    "DensityField",
    "ConstantDensity",
    "AffineDensity",
    "PiecewiseLinearDensity",
    "BumpDensity",
    "make_field",
    "adaptive_simpson",
]

_SQRT2 = math.sqrt(2.0)
_HALF_SQRT_2PI = math.sqrt(math.pi / 2.0)


def _check_domain(z: np.ndarray) -> None:
    if np.any((z < 0.0) | (z > 1.0)) or not np.all(np.isfinite(z)):
        raise ValueError("position must lie in [0, 1]")


class DensityField:
    """Base class for weight profiles on [0, 1].

    Subclasses implement ``_density`` and ``_mass`` on raw arrays; the public
    methods add domain checking and scalar/array polymorphism.  All methods
    are pure, so instances are safe to share across threads.
    """

    family: str = "abstract"
    density_max: float
    slope_max: float

    # -- family-specific raw kernels -------------------------------------

    def _density(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _mass(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    # -- public surface ----------------------------------------------------

    def density(self, z):
        """Evaluate the weight profile at ``z`` (scalar or array)."""
        arr = np.asarray(z, dtype=float)
        _check_domain(arr)
        out = self._density(arr)
        return float(out) if arr.ndim == 0 else out

    def mass(self, z):
        """Cumulative mass ``F(z)``, the integral of the density from 0 to z."""
        arr = np.asarray(z, dtype=float)
        _check_domain(arr)
        out = self._mass(arr)
        return float(out) if arr.ndim == 0 else out

    @property
    def total_mass(self) -> float:
        return float(self._mass(np.asarray(1.0)))

    def distance(self, a, b):
        """Density-weighted distance: mass of the interval between a and b."""
        return np.abs(self.mass(b) - self.mass(a))

    def inverse_mass(self, y: float, tol: float = 1e-12) -> float:
        """Position ``z`` with ``|F(z) - y| <= tol``, found by bisection.

        The cumulative mass is strictly increasing (density >= 1), so
        bisection converges unconditionally.  ``y`` outside [0, F(1)] is
        rejected.
        """
        total = self.total_mass
        if not 0.0 <= y <= total:
            raise ValueError(f"mass target {y} outside [0, {total}]")
        if y == 0.0:
            return 0.0
        if y == total:
            return 1.0
        lo, hi = 0.0, 1.0
        mid = 0.5
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fm = float(self._mass(np.asarray(mid)))
            if abs(fm - y) <= tol:
                return mid
            if fm < y:
                lo = mid
            else:
                hi = mid
        raise ArithmeticError(
            f"bisection stalled: |F(z) - y| = {abs(float(self._mass(np.asarray(mid))) - y):.3e} > tol={tol}"
        )

    def validate(self, grid_points: int = 10_000) -> list[str]:
        """Check the field against its declared bounds on a uniform grid.

        Returns a list of human-readable violations; an empty list means the
        profile stays >= 1 and the declared ``density_max`` / ``slope_max``
        dominate the grid-sampled density and finite-difference slope.
        """
        z = np.linspace(0.0, 1.0, grid_points)
        rho = self._density(z)
        violations: list[str] = []

        low = rho < 1.0 - 1e-12
        if np.any(low):
            i = int(np.argmax(low))
            violations.append(
                f"density at z={z[i]:.6g} is {rho[i]:.6g}, below the required minimum 1"
            )

        grid_max = float(rho.max())
        if grid_max > self.density_max * (1.0 + 1e-9) + 1e-12:
            violations.append(
                f"grid density maximum {grid_max:.6g} exceeds declared density_max {self.density_max:.6g}"
            )

        fd = np.abs(np.diff(rho)) * (grid_points - 1)
        fd_max = float(fd.max())
        if fd_max > self.slope_max * (1.0 + 1e-9) + 1e-9:
            violations.append(
                f"grid slope maximum {fd_max:.6g} exceeds declared slope_max {self.slope_max:.6g}"
            )
        return violations


@dataclass(frozen=True)
class ConstantDensity(DensityField):
    """Uniform profile rho(z) = level."""

    level: float = 1.0
    density_max: float | None = None
    slope_max: float | None = None

    family = "constant"

    def __post_init__(self):
        if not self.level > 0.0:
            raise ValueError("level must be positive")
        if self.density_max is None:
            object.__setattr__(self, "density_max", float(self.level))
        if self.slope_max is None:
            object.__setattr__(self, "slope_max", 0.0)

    def _density(self, z):
        return np.full_like(z, self.level)

    def _mass(self, z):
        return self.level * z


@dataclass(frozen=True)
class AffineDensity(DensityField):
    """Linear profile rho(z) = intercept + slope * z."""

    intercept: float = 1.0
    slope: float = 0.0
    density_max: float | None = None
    slope_max: float | None = None

    family = "affine"

    def __post_init__(self):
        if min(self.intercept, self.intercept + self.slope) <= 0.0:
            raise ValueError("affine density must stay positive on [0, 1]")
        if self.density_max is None:
            object.__setattr__(
                self, "density_max", float(max(self.intercept, self.intercept + self.slope))
            )
        if self.slope_max is None:
            object.__setattr__(self, "slope_max", abs(self.slope))

    def _density(self, z):
        return self.intercept + self.slope * z

    def _mass(self, z):
        return self.intercept * z + 0.5 * self.slope * z * z


@dataclass(frozen=True)
class PiecewiseLinearDensity(DensityField):
    """Broken-line profile interpolating ``values`` at ``breakpoints``.

    Breakpoints must start at 0, end at 1, and increase strictly.  The
    cumulative mass is the running trapezoid sum, exact for this family.
    The profile has kinks, so it is admitted for testing the sampling
    protocol (which never differentiates the density) but excluded from
    smoothness-based diagnostics.
    """

    breakpoints: tuple[float, ...] = (0.0, 1.0)
    values: tuple[float, ...] = (1.0, 1.0)
    density_max: float | None = None
    slope_max: float | None = None

    family = "piecewise-linear"

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if bp.ndim != 1 or bp.shape != vals.shape or bp.size < 2:
            raise ValueError("breakpoints and values must be equal-length lists of >= 2 entries")
        if bp[0] != 0.0 or bp[-1] != 1.0 or np.any(np.diff(bp) <= 0.0):
            raise ValueError("breakpoints must increase strictly from 0 to 1")
        if np.any(vals <= 0.0):
            raise ValueError("piecewise values must be positive")
        object.__setattr__(self, "breakpoints", tuple(float(b) for b in bp))
        object.__setattr__(self, "values", tuple(float(v) for v in vals))
        seg_mass = 0.5 * (vals[1:] + vals[:-1]) * np.diff(bp)
        node_mass = np.concatenate(([0.0], np.cumsum(seg_mass)))
        object.__setattr__(self, "_bp", bp)
        object.__setattr__(self, "_vals", vals)
        object.__setattr__(self, "_node_mass", node_mass)
        if self.density_max is None:
            object.__setattr__(self, "density_max", float(vals.max()))
        if self.slope_max is None:
            object.__setattr__(
                self, "slope_max", float(np.max(np.abs(np.diff(vals) / np.diff(bp))))
            )

    def _density(self, z):
        return np.interp(z, self._bp, self._vals)

    def _mass(self, z):
        idx = np.clip(np.searchsorted(self._bp, z, side="right") - 1, 0, self._bp.size - 2)
        z0 = self._bp[idx]
        v0 = self._vals[idx]
        vz = np.interp(z, self._bp, self._vals)
        return self._node_mass[idx] + 0.5 * (v0 + vz) * (z - z0)


@dataclass(frozen=True)
class BumpDensity(DensityField):
    """Gaussian bump rho(z) = 1 + amplitude * exp(-(z - center)^2 / (2 width^2)).

    The cumulative mass has an exact closed form through the error function,
    which is what ``mass`` evaluates; ``adaptive_simpson`` provides an
    independent quadrature cross-check in the test suite.
    """

    amplitude: float = 1.0
    center: float = 0.5
    width: float = 0.1
    density_max: float | None = None
    slope_max: float | None = None

    family = "smooth-bump"

    def __post_init__(self):
        if self.amplitude < 0.0:
            raise ValueError("amplitude must be nonnegative")
        if not self.width > 0.0:
            raise ValueError("width must be positive")
        if self.density_max is None:
            peak = float(np.clip(self.center, 0.0, 1.0))
            object.__setattr__(self, "density_max", float(self._density(np.asarray(peak))))
        if self.slope_max is None:
            object.__setattr__(self, "slope_max", self._exact_slope_max())

    def _exact_slope_max(self) -> float:
        # |rho'|(z) = A |u| / w^2 * exp(-u^2 / 2w^2) with u = z - center is
        # unimodal in |u| with its peak at |u| = w, so the supremum over the
        # interval is attained at u = +/-w if reachable, else at an endpoint.
        a, b = -self.center, 1.0 - self.center
        candidates = [a, b]
        for u in (-self.width, self.width):
            if a <= u <= b:
                candidates.append(u)
        g = lambda u: self.amplitude * abs(u) / self.width**2 * math.exp(
            -(u * u) / (2.0 * self.width**2)
        )
        return max(g(u) for u in candidates)

    def _density(self, z):
        u = (z - self.center) / self.width
        return 1.0 + self.amplitude * np.exp(-0.5 * u * u)

    def _mass(self, z):
        scale = self.amplitude * self.width * _HALF_SQRT_2PI
        lo = erf(-self.center / (self.width * _SQRT2))
        return z + scale * (erf((z - self.center) / (self.width * _SQRT2)) - lo)


_FAMILIES = {
    "constant": ConstantDensity,
    "affine": AffineDensity,
    "piecewise-linear": PiecewiseLinearDensity,
    "smooth-bump": BumpDensity,
}


def make_field(family: str, **params) -> DensityField:
    """Construct a density field by family name.

    Families and parameters: ``constant`` (level), ``affine`` (intercept,
    slope), ``piecewise-linear`` (breakpoints, values), ``smooth-bump``
    (amplitude, center, width).
    """
    try:
        cls = _FAMILIES[family]
    except KeyError:
        raise ValueError(
            f"unknown density family {family!r}; expected one of {sorted(_FAMILIES)}"
        ) from None
    if family == "piecewise-linear":
        if "breakpoints" in params:
            params["breakpoints"] = tuple(params["breakpoints"])
        if "values" in params:
            params["values"] = tuple(params["values"])
    return cls(**params)


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = 50,
) -> float:
    """Integrate ``f`` over [a, b] by adaptive Simpson subdivision.

    Splits an interval whenever the Richardson error estimate exceeds the
    (halved per level) tolerance.  Used as an independent quadrature oracle
    for the closed-form cumulative masses.
    """
    if a == b:
        return 0.0
    if a > b:
        return -adaptive_simpson(f, b, a, tol, max_depth)

    def simpson(fa, fm, fb, h):
        return h / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, fa, b, fb, m, fm, whole, tol, depth):
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = f(lm)
        frm = f(rm)
        left = simpson(fa, flm, fm, m - a)
        right = simpson(fm, frm, fb, b - m)
        err = (left + right - whole) / 15.0
        if depth >= max_depth or abs(err) <= tol:
            return left + right + err
        return recurse(a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1) + recurse(
            m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1
        )

    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    return recurse(a, fa, b, fb, m, fm, simpson(fa, fm, fb, b - a), tol, 0)
