"""Seeded trajectories, ensembles, and convergence-rate diagnostics.

A run executes the coverage protocol from a configured initial layout and
records, every ``record_every`` steps, the positions together with the gap
energy, the coverage radius, and the per-agent squared distance to the
optimal layout.  Ensembles repeat a run over independent seeds and average
the squared error, which is the quantity the O(1/t) guarantee bounds;
``expected_error_bound`` evaluates that guarantee and ``fit_tail_slope``
estimates the empirical decay rate from the tail of a curve.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .density import DensityField
from .metrics import (
    boundary_coefficients,
    coverage_radius,
    gap_energy,
    validate_positions,
)
from .oracle import optimal_positions
from .protocol import NoiseModel, StepSchedule, _imbalance, _step_kernel

__all__ = [
    "SimConfig",
    "RunRecord",
    "EnsembleCurve",
    "run",
    "ensemble",
    "expected_error_bound",
    "fit_tail_slope",
]

INIT_KINDS = ("uniform-random", "all-at-one", "explicit")


@dataclass(frozen=True)
class SimConfig:
    """Everything needed to reproduce one protocol run."""

    n: int
    iters: int
    seed: int
    field: DensityField
    noise: NoiseModel
    schedule: StepSchedule
    init: str = "uniform-random"
    init_positions: tuple[float, ...] | None = None
    record_every: int = 10

    def validate(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.iters < 1:
            raise ValueError("iters must be at least 1")
        if self.record_every < 1:
            raise ValueError("record_every must be at least 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        violations = self.field.validate()
        if violations:
            raise ValueError("invalid density field: " + "; ".join(violations))
        if self.init not in INIT_KINDS:
            raise ValueError(f"unknown init kind {self.init!r}; expected one of {INIT_KINDS}")
        if self.init == "explicit":
            if self.init_positions is None:
                raise ValueError("explicit init requires positions")
            x = validate_positions(np.asarray(self.init_positions, dtype=float))
            if x.size != self.n:
                raise ValueError("explicit init must list exactly n positions")
        elif self.init_positions is not None:
            raise ValueError("init positions are only valid with explicit init")


@dataclass(frozen=True)
class RunRecord:
    """One seeded trajectory with per-recorded-step diagnostics.

    ``times[i]`` is the iteration count at which row i was taken; row 0 is
    the initial layout and the last row is the final one.  ``sq_error`` is
    the mean over agents of the squared distance to the optimal layout.
    """

    config: SimConfig
    times: np.ndarray
    positions: np.ndarray
    energy: np.ndarray
    radius: np.ndarray
    sq_error: np.ndarray

    @property
    def final_positions(self) -> np.ndarray:
        return self.positions[-1]


@dataclass(frozen=True)
class EnsembleCurve:
    """Mean squared-error curve over independent seeds (merged in seed order)."""

    times: np.ndarray
    mean_sq_error: np.ndarray
    stderr: np.ndarray
    per_seed: np.ndarray
    seeds: tuple[int, ...]


def _initial_positions(config: SimConfig, rng: np.random.Generator) -> np.ndarray:
    if config.init == "uniform-random":
        return np.sort(rng.random(config.n))
    if config.init == "all-at-one":
        return np.ones(config.n)
    return np.asarray(config.init_positions, dtype=float)


#: Steps per chunked random draw inside ``run``; each step consumes a
#: contiguous block of the seed's stream, so chunk size never changes the
#: trajectory, which stays bit-identical to stepping one ``protocol_step``
#: at a time.
_CHUNK_STEPS = 4096
_CHUNK_BUDGET_DOUBLES = 4_194_304


def _chunk_steps(n: int) -> int:
    return max(1, min(_CHUNK_STEPS, _CHUNK_BUDGET_DOUBLES // (5 * n)))


def run(config: SimConfig) -> RunRecord:
    """Execute one seeded trajectory of the coverage protocol.

    The per-step arithmetic is exactly that of ``protocol.protocol_step``;
    the initial layout is validated once and the protocol's order
    preservation keeps every later layout valid.  Identical configs produce
    bit-identical records.
    """
    config.validate()
    rng = np.random.default_rng(config.seed)
    x = validate_positions(_initial_positions(config, rng))
    x_star = optimal_positions(config.field, config.n)

    n = config.n
    field = config.field
    noise = config.noise
    schedule = config.schedule
    cl, cr = boundary_coefficients(n)
    scale_den = 16.0 * (field.density_max + noise.bound) ** 2

    padded = np.empty(n + 2)
    padded[0] = 0.0
    padded[-1] = 1.0
    padded[1:-1] = x
    x = padded[1:-1]
    left_anchor = padded[:-2]
    right_anchor = padded[2:]

    noise_draws = 3 * n * noise.draws_per_sample
    zero_w = np.zeros((n, 3)) if noise_draws == 0 else None

    times = [0]
    rows = [x.copy()]
    t = 0
    max_chunk = _chunk_steps(n)
    while t < config.iters:
        chunk = min(max_chunk, config.iters - t)
        block = rng.random((chunk, 2 * n + noise_draws))
        u_block = block[:, : 2 * n].reshape(chunk, n, 2)
        if noise_draws:
            w_block = noise.transform_uniform(block[:, 2 * n :]).reshape(chunk, n, 3)
        for j in range(chunk):
            alpha = schedule.stepsize(t)
            w = w_block[j] if noise_draws else zero_w
            _, _, _, ov, _, lm, rm = _step_kernel(
                x, left_anchor, right_anchor, u_block[j], w, field
            )
            padded[1:-1] = x - (alpha / scale_den) * _imbalance(ov, lm, rm, cl, cr)
            t += 1
            if t % config.record_every == 0 or t == config.iters:
                times.append(t)
                rows.append(x.copy())

    positions = np.vstack(rows)
    energy = np.empty(len(rows))
    radius = np.empty(len(rows))
    sq_error = np.empty(len(rows))
    for i, row in enumerate(rows):
        energy[i] = gap_energy(row, field)
        radius[i] = coverage_radius(row, field)
        sq_error[i] = float(np.sum((row - x_star) ** 2)) / config.n

    return RunRecord(
        config=config,
        times=np.asarray(times),
        positions=positions,
        energy=energy,
        radius=radius,
        sq_error=sq_error,
    )


def ensemble(config: SimConfig, seeds: Sequence[int]) -> EnsembleCurve:
    """Mean and standard error of the squared-error curve over seeds.

    Each seed runs independently with its own generator; results do not
    depend on execution order.
    """
    seeds = tuple(int(s) for s in seeds)
    if len(seeds) < 2:
        raise ValueError("need at least 2 seeds")
    curves = []
    times = None
    for s in seeds:
        record = run(replace(config, seed=s))
        if times is None:
            times = record.times
        curves.append(record.sq_error)
    per_seed = np.column_stack(curves)
    mean = per_seed.mean(axis=1)
    stderr = per_seed.std(axis=1, ddof=1) / np.sqrt(len(seeds))
    return EnsembleCurve(times=times, mean_sq_error=mean, stderr=stderr, per_seed=per_seed, seeds=seeds)


def expected_error_bound(n: int, u: float, density_max: float, noise_bound: float, slope_max: float, t):
    """Guaranteed ceiling on the expected per-agent squared error at step t.

    Valid for the ``theorem`` schedule with ``u`` an upper bound on the
    number of agents:

        16 n u^4 (density_max + noise_bound)^4
            * (4 density_max^2 + 2 slope_max density_max)
            / (8 u^2 (density_max + noise_bound)^2 + t)

    Accepts a scalar or array of iteration indices.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if u < n:
        raise ValueError("u must be an upper bound on the number of agents (u >= n)")
    dm = float(density_max)
    nb = float(noise_bound)
    numerator = 16.0 * n * u**4 * (dm + nb) ** 4 * (4.0 * dm * dm + 2.0 * slope_max * dm)
    denominator = 8.0 * u * u * (dm + nb) ** 2 + np.asarray(t, dtype=float)
    out = numerator / denominator
    return float(out) if np.ndim(t) == 0 else out


def fit_tail_slope(times, errors, tail_fraction: float = 0.5) -> float:
    """Least-squares slope of log(error) against log(t) over the curve tail.

    The window is the last ``tail_fraction`` of the recorded points with
    t > 0; it must contain at least 10 points and strictly positive errors.
    A slope near -1 indicates 1/t decay.
    """
    if not 0.0 < tail_fraction <= 1.0:
        raise ValueError("tail_fraction must lie in (0, 1]")
    t = np.asarray(times, dtype=float)
    e = np.asarray(errors, dtype=float)
    if t.shape != e.shape or t.ndim != 1:
        raise ValueError("times and errors must be 1-d arrays of equal length")
    keep = t > 0.0
    t, e = t[keep], e[keep]
    count = int(np.ceil(tail_fraction * t.size))
    t, e = t[-count:], e[-count:]
    if t.size < 10:
        raise ValueError("need at least 10 recorded points in the fit window")
    if np.any(e <= 0.0):
        raise ValueError("non-positive errors in the fit window; slope undefined")
    slope = np.polyfit(np.log(t), np.log(e), 1)[0]
    return float(slope)
