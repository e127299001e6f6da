"""Self-contained verification suites for the protocol's core guarantees.

Each suite stresses one property with fixed, documented budgets and reports
a pass/fail result plus the first counterexample found (state and seed), so
a failure is immediately reproducible.  The suites are deliberately
independent of the code paths they check: gradient estimates are compared
against the exact closed-form gradient, the closed-form coverage radius
against a brute-force grid, and the tridiagonal eigenvalue bound against a
direct solve.

Suites (run by ``linecover verify``):

* order preservation: fuzzed protocol steps never reorder agents nor move
  one by more than a quarter of the adjacent gap;
* gradient dominance: squared gradient norm over energy excess stays at or
  above 4 / n^2 at random layouts;
* curvature bound: the mass-coordinate Hessian's smallest eigenvalue stays
  at or above 2 / n^2;
* unbiasedness: the Monte Carlo mean of the gradient estimate matches the
  exact gradient within four standard errors, and every draw respects the
  norm cap 64 (density_max + noise_bound)^4;
* coverage equivalence: closed-form coverage radius equals the grid
  brute force within the grid resolution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import protocol
from .density import (
    AffineDensity,
    BumpDensity,
    ConstantDensity,
    DensityField,
    PiecewiseLinearDensity,
)
from .metrics import (
    boundary_coefficients,
    coverage_radius,
    coverage_radius_grid,
    gap_energy_gradient,
    mass_hessian_min_eig,
)
from .oracle import gradient_dominance
from .protocol import NoiseModel

__all__ = [
    "SuiteResult",
    "standard_fields",
    "random_monotone_positions",
    "order_preservation_suite",
    "gradient_dominance_suite",
    "curvature_bound_suite",
    "unbiasedness_suite",
    "coverage_equivalence_suite",
    "run_all_suites",
    "mc_gradient_stats",
]

# Fixed budgets so that "verify" always means the same check.
ORDER_STEPS_PER_COMBO = 4_000
ORDER_CHAIN_LENGTH = 80
DOMINANCE_STATES = 300
CURVATURE_MAX_N = 50
MC_DRAWS = 200_000
MC_STATES_PER_COMBO = 3
MC_CHUNK = 50_000
COVERAGE_STATES = 30
COVERAGE_GRID = 20_001
NOISE_BOUNDS = (0.0, 0.5)
SUITE_SEED = 20240915


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str
    counterexample: str | None = None


def standard_fields() -> list[DensityField]:
    """One representative instance per density family."""
    return [
        ConstantDensity(level=1.0),
        AffineDensity(intercept=1.0, slope=1.0),
        PiecewiseLinearDensity(
            breakpoints=(0.0, 0.25, 0.6, 1.0), values=(1.0, 2.0, 1.2, 1.8)
        ),
        BumpDensity(amplitude=2.0, center=0.5, width=0.1),
    ]


def random_monotone_positions(rng: np.random.Generator, n: int) -> np.ndarray:
    """A random valid layout: sorted uniform draws."""
    return np.sort(rng.random(n))


def _fuzz_initial(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random layouts biased toward awkward cases: ties, clusters, corners."""
    style = rng.integers(0, 4)
    if style == 0:
        return np.sort(rng.random(n))
    if style == 1:
        return np.ones(n) if rng.random() < 0.5 else np.zeros(n)
    if style == 2:
        base = np.sort(rng.random(max(1, n // 2 + 1)))
        return np.sort(rng.choice(base, size=n, replace=True))
    center = rng.random()
    return np.sort(np.clip(center + 0.02 * (rng.random(n) - 0.5), 0.0, 1.0))


def _move_violations(x: np.ndarray, x_next: np.ndarray) -> np.ndarray:
    """True where an agent moved past a quarter of the gap it moved into."""
    left = np.concatenate(([0.0], x[:-1]))
    right = np.concatenate((x[1:], [1.0]))
    gap_l = x - left
    gap_r = right - x
    move = x_next - x
    slack = 1e-12
    too_far_right = move > 0.25 * gap_r * (1.0 + slack) + 1e-18
    too_far_left = -move > 0.25 * gap_l * (1.0 + slack) + 1e-18
    return too_far_right | too_far_left


def order_preservation_suite(
    sizes: Sequence[int],
    steps_per_combo: int = ORDER_STEPS_PER_COMBO,
    seed: int = SUITE_SEED,
) -> SuiteResult:
    """Fuzz protocol steps; fail on any reordering or oversized move."""
    rng = np.random.default_rng(seed)
    noises = [NoiseModel(kind, bound) for kind, bound in
              [("uniform", 0.5), ("bernoulli", 0.5), ("zero", 0.0)]]
    total = 0
    for n in sizes:
        for field in standard_fields():
            for noise in noises:
                done = 0
                while done < steps_per_combo:
                    x = _fuzz_initial(rng, n)
                    for _ in range(min(ORDER_CHAIN_LENGTH, steps_per_combo - done)):
                        alpha = rng.random()
                        x_next = protocol.protocol_step(x, field, noise, alpha, rng)
                        done += 1
                        bad_order = (
                            x_next[0] < 0.0
                            or x_next[-1] > 1.0
                            or np.any(np.diff(x_next) < 0.0)
                        )
                        bad_move = np.any(_move_violations(x, x_next))
                        if bad_order or bad_move:
                            kind = "ordering" if bad_order else "quarter-gap move"
                            return SuiteResult(
                                name="order-preservation",
                                passed=False,
                                detail=f"{kind} violated after {total + done} steps",
                                counterexample=(
                                    f"n={n} family={field.family} noise={noise.kind} "
                                    f"alpha={alpha!r} seed={seed} x={x.tolist()} "
                                    f"x_next={x_next.tolist()}"
                                ),
                            )
                        x = x_next
                total += done
    return SuiteResult(
        name="order-preservation",
        passed=True,
        detail=f"{total} fuzzed steps kept ordering and quarter-gap move caps",
    )


def gradient_dominance_suite(
    sizes: Sequence[int],
    states_per_combo: int = DOMINANCE_STATES,
    seed: int = SUITE_SEED,
) -> SuiteResult:
    """Check the 4/n^2 gradient-dominance bound at random layouts."""
    rng = np.random.default_rng(seed)
    checked = 0
    for n in sizes:
        for field in standard_fields():
            for _ in range(states_per_combo):
                x = random_monotone_positions(rng, n)
                result = gradient_dominance(x, field)
                if result.at_optimum:
                    continue
                checked += 1
                if not result.passed:
                    return SuiteResult(
                        name="gradient-dominance",
                        passed=False,
                        detail=f"ratio {result.ratio:.6g} below bound {result.bound:.6g}",
                        counterexample=(
                            f"n={n} family={field.family} seed={seed} x={x.tolist()}"
                        ),
                    )
    return SuiteResult(
        name="gradient-dominance",
        passed=True,
        detail=f"ratio >= 4/n^2 at {checked} random layouts",
    )


def curvature_bound_suite(max_n: int = CURVATURE_MAX_N) -> SuiteResult:
    """Smallest mass-coordinate Hessian eigenvalue against 2/n^2."""
    for n in range(1, max_n + 1):
        lam = mass_hessian_min_eig(n)
        if lam < 2.0 / (n * n) - 1e-12:
            return SuiteResult(
                name="curvature-bound",
                passed=False,
                detail=f"min eigenvalue {lam:.6g} below 2/n^2 at n={n}",
                counterexample=f"n={n}",
            )
    return SuiteResult(
        name="curvature-bound",
        passed=True,
        detail=f"min eigenvalue >= 2/n^2 for n=1..{max_n}",
    )


def mc_gradient_stats(
    positions: np.ndarray,
    field: DensityField,
    noise: NoiseModel,
    rng: np.random.Generator,
    draws: int,
    chunk: int = MC_CHUNK,
) -> tuple[np.ndarray, np.ndarray, float]:
    """Monte Carlo mean, standard error, and max squared norm of the estimate.

    Uses the protocol's own probe sampler in batched form; chunked so memory
    stays modest at millions of draws.
    """
    x = np.asarray(positions, dtype=float)
    cl, cr = boundary_coefficients(x.size)
    total = np.zeros(x.size)
    total_sq = np.zeros(x.size)
    max_norm_sq = 0.0
    remaining = draws
    while remaining > 0:
        size = min(chunk, remaining)
        _, _, _, ov, _, lm, rm = protocol._draw_probes(x, field, noise, rng, size=size)
        g = protocol._imbalance(ov, lm, rm, cl, cr)
        total += g.sum(axis=0)
        total_sq += (g * g).sum(axis=0)
        max_norm_sq = max(max_norm_sq, float((g * g).sum(axis=1).max()))
        remaining -= size
    mean = total / draws
    variance = np.maximum(total_sq / draws - mean * mean, 0.0)
    stderr = np.sqrt(variance / max(draws - 1, 1))
    return mean, stderr, max_norm_sq


def unbiasedness_suite(
    sizes: Sequence[int],
    draws: int = MC_DRAWS,
    states_per_combo: int = MC_STATES_PER_COMBO,
    seed: int = SUITE_SEED,
) -> SuiteResult:
    """Gradient-estimate mean against the exact gradient, plus the norm cap."""
    rng = np.random.default_rng(seed)
    fields = standard_fields()
    combos = 0
    for n in sizes:
        for bound in NOISE_BOUNDS:
            for idx in range(states_per_combo):
                field = fields[(combos + idx) % len(fields)]
                noise = NoiseModel("uniform" if bound > 0 else "zero", bound)
                x = random_monotone_positions(rng, n)
                exact = gap_energy_gradient(x, field)
                mean, stderr, max_norm_sq = mc_gradient_stats(x, field, noise, rng, draws)
                cap = 64.0 * (field.density_max + noise.bound) ** 4
                if max_norm_sq > cap * (1.0 + 1e-9):
                    return SuiteResult(
                        name="unbiasedness",
                        passed=False,
                        detail=f"squared norm {max_norm_sq:.6g} exceeded cap {cap:.6g}",
                        counterexample=f"n={n} family={field.family} M={bound} seed={seed} x={x.tolist()}",
                    )
                tolerance = 4.0 * stderr + 1e-12 * np.maximum(1.0, np.abs(exact))
                if np.any(np.abs(mean - exact) > tolerance):
                    k = int(np.argmax(np.abs(mean - exact) - tolerance))
                    return SuiteResult(
                        name="unbiasedness",
                        passed=False,
                        detail=(
                            f"component {k}: mean {mean[k]:.6g} vs exact {exact[k]:.6g} "
                            f"(4se={4 * stderr[k]:.3g})"
                        ),
                        counterexample=f"n={n} family={field.family} M={bound} seed={seed} x={x.tolist()}",
                    )
            combos += states_per_combo
    return SuiteResult(
        name="unbiasedness",
        passed=True,
        detail=f"mean matched exact gradient within 4 standard errors ({draws} draws/state)",
    )


def coverage_equivalence_suite(
    sizes: Sequence[int],
    states_per_combo: int = COVERAGE_STATES,
    grid_size: int = COVERAGE_GRID,
    seed: int = SUITE_SEED,
) -> SuiteResult:
    """Closed-form coverage radius against the grid brute force."""
    rng = np.random.default_rng(seed)
    for n in sizes:
        for field in standard_fields():
            allowed = 2.0 * field.total_mass / grid_size
            for _ in range(states_per_combo):
                x = random_monotone_positions(rng, n)
                closed = coverage_radius(x, field)
                grid = coverage_radius_grid(x, field, grid_size)
                if abs(closed - grid) > allowed:
                    return SuiteResult(
                        name="coverage-equivalence",
                        passed=False,
                        detail=f"closed form {closed:.9g} vs grid {grid:.9g} (allowed {allowed:.3g})",
                        counterexample=f"n={n} family={field.family} seed={seed} x={x.tolist()}",
                    )
    return SuiteResult(
        name="coverage-equivalence",
        passed=True,
        detail=f"closed form matched the {grid_size}-point grid oracle",
    )


def run_all_suites(sizes: Sequence[int]) -> list[SuiteResult]:
    """Run every suite at the given agent counts (order matters for output)."""
    sizes = tuple(int(n) for n in sizes)
    if not sizes or any(n < 1 for n in sizes):
        raise ValueError("sizes must be positive agent counts")
    return [
        order_preservation_suite(sizes),
        gradient_dominance_suite(sizes),
        curvature_bound_suite(),
        unbiasedness_suite(sizes),
        coverage_equivalence_suite(sizes),
    ]
