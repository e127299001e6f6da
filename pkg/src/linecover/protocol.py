"""The randomized scalar coverage protocol.

At each step every agent draws one random probe point between itself and its
left neighbor, one between itself and its right neighbor, and takes noisy
density samples at those two points and at its own position (three samples
per agent).  From the probes it forms the weighted gap estimates

    L_k = sampled_density(left_probe)  * (x_k - x_{k-1})
    R_k = sampled_density(right_probe) * (x_{k+1} - x_k)

and nudges itself toward balancing them, scaled by the stepsize and by
``8 * (density_max + noise_bound)^2``.  The combined move is an unbiased
stochastic gradient step on the gap energy, and the scaling guarantees no
agent ever moves more than a quarter of the adjacent gap, so the ordering of
the agents is preserved on every sample path.

All randomness flows through a caller-supplied ``numpy.random.Generator``;
identical generators yield bit-identical trajectories.  Per step the stream
is consumed in a fixed order: first the two probe-point uniforms for every
agent, then the noise draws in (left, own, right) order agent by agent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import DensityField
from .metrics import boundary_coefficients, validate_positions

__all__ = [
    "NoiseModel",
    "StepSchedule",
    "ProbeSamples",
    "sample_density",
    "stochastic_gradient",
    "protocol_step",
]

NOISE_KINDS = ("uniform", "bernoulli", "zero")


@dataclass(frozen=True)
class NoiseModel:
    """Zero-mean measurement noise with support inside [-bound, bound].

    Kinds: ``uniform`` on [-bound, bound], ``bernoulli`` (+/- bound with
    equal probability), ``zero`` (noiseless; consumes no random draws).
    The bound must not exceed 1 so that sampled densities, which sit on a
    profile that is at least 1, stay nonnegative; clamping negative samples
    instead would bias the gradient estimate.
    """

    kind: str = "uniform"
    bound: float = 0.0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}; expected one of {NOISE_KINDS}")
        if not 0.0 <= self.bound <= 1.0:
            raise ValueError("noise bound must be in [0, 1] so sampled densities stay nonnegative")

    @property
    def draws_per_sample(self) -> int:
        """Raw uniforms consumed per noise sample (0 for the zero kind)."""
        return 0 if self.kind == "zero" else 1

    def transform_uniform(self, u: np.ndarray) -> np.ndarray:
        """Map raw uniforms on [0, 1) to noise draws."""
        if self.kind == "zero":
            return np.zeros_like(u)
        if self.kind == "uniform":
            return self.bound * (2.0 * u - 1.0)
        return self.bound * np.where(u < 0.5, -1.0, 1.0)

    def samples(self, rng: np.random.Generator, shape) -> np.ndarray:
        if self.kind == "zero":
            return np.zeros(shape)
        return self.transform_uniform(rng.random(shape))


@dataclass(frozen=True)
class StepSchedule:
    """Decaying stepsize rule mapping an iteration index to alpha in [0, 1].

    Kinds:

    * ``theorem``  -- ``gain / (gain + t)`` with
      ``gain = 8 u^2 (density_max + noise_bound)^2``; with ``u`` an upper
      bound on the number of agents this is the schedule under which the
      expected squared error obeys the O(1/t) guarantee.
    * ``power``    -- ``1 / (t + 1)^p`` for an exponent p in (1/2, 1].
    * ``hybrid``   -- 1 for the first half of a fixed horizon, ``1/sqrt(t)``
      afterwards; decays more slowly than the guarantee schedule but works
      well for medium-size networks over a few thousand iterations.
    """

    kind: str
    u: float | None = None
    p: float | None = None
    horizon: int | None = None
    gain: float | None = None

    @classmethod
    def theorem(cls, u: float, density_max: float, noise_bound: float) -> "StepSchedule":
        if u < 1:
            raise ValueError("u must be at least 1")
        gain = 8.0 * u * u * (density_max + noise_bound) ** 2
        return cls(kind="theorem", u=float(u), gain=gain)

    @classmethod
    def power(cls, p: float) -> "StepSchedule":
        if not 0.5 < p <= 1.0:
            raise ValueError("power exponent must lie in (1/2, 1]")
        return cls(kind="power", p=float(p))

    @classmethod
    def hybrid(cls, horizon: int) -> "StepSchedule":
        if horizon < 2:
            raise ValueError("hybrid horizon must be at least 2")
        return cls(kind="hybrid", horizon=int(horizon))

    def stepsize(self, t: int) -> float:
        if t < 0:
            raise ValueError("iteration index must be nonnegative")
        if self.kind == "theorem":
            return self.gain / (self.gain + t)
        if self.kind == "power":
            return (t + 1.0) ** (-self.p)
        if self.kind == "hybrid":
            return 1.0 if t < self.horizon / 2 else 1.0 / math.sqrt(t)
        raise ValueError(f"unknown schedule kind {self.kind!r}")


@dataclass(frozen=True)
class ProbeSamples:
    """The 3n sample records behind one gradient draw (points and values)."""

    left_points: np.ndarray
    right_points: np.ndarray
    left_values: np.ndarray
    own_values: np.ndarray
    right_values: np.ndarray


def sample_density(field: DensityField, noise: NoiseModel, z, rng: np.random.Generator):
    """One noisy density sample at each requested position."""
    value = field.density(z) + noise.samples(rng, np.shape(z))
    return float(value) if np.ndim(z) == 0 else value


def _step_kernel(x, left_anchor, right_anchor, u, w, field):
    """Probe points, noisy values, and weighted gap estimates for one layout.

    ``u`` holds the probe-point uniforms (..., n, 2) and ``w`` the noise
    draws (..., n, 3) in (left, own, right) order.  Probe points are clipped
    back into their gap so rounding can never push one past a neighbor, and
    the density kernels are evaluated raw since the points are in-domain by
    construction.
    """
    gap_l = x - left_anchor
    gap_r = right_anchor - x
    left_pts = np.minimum(np.maximum(left_anchor + u[..., 0] * gap_l, left_anchor), x)
    right_pts = np.minimum(np.maximum(x + u[..., 1] * gap_r, x), right_anchor)
    left_vals = field._density(left_pts) + w[..., 0]
    own_vals = field._density(x) + w[..., 1]
    right_vals = field._density(right_pts) + w[..., 2]
    left_mass = left_vals * gap_l
    right_mass = right_vals * gap_r
    return left_pts, right_pts, left_vals, own_vals, right_vals, left_mass, right_mass


def _draw_probes(x, field, noise, rng, size=None):
    """Draw probe points and noisy values for every agent.

    With ``size=None`` returns arrays of shape (n,) for a single protocol
    step; with an integer size returns (size, n) batches sharing the same
    layout, used by Monte Carlo verification.
    """
    n = x.size
    left_anchor = np.concatenate(([0.0], x[:-1]))
    right_anchor = np.concatenate((x[1:], [1.0]))
    u = rng.random((n, 2) if size is None else (size, n, 2))
    w = noise.samples(rng, (n, 3) if size is None else (size, n, 3))
    return _step_kernel(x, left_anchor, right_anchor, u, w, field)


def _imbalance(own_vals, left_mass, right_mass, cl, cr):
    """Gradient estimate: own density sample times the weighted gap imbalance."""
    return own_vals * (cl * left_mass - cr * right_mass)


def stochastic_gradient(
    positions, field: DensityField, noise: NoiseModel, rng: np.random.Generator
) -> tuple[np.ndarray, ProbeSamples]:
    """One three-sample-per-agent estimate of the gap-energy gradient.

    The estimate is unbiased for ``gap_energy_gradient`` at the current
    layout, and its squared norm never exceeds
    ``64 * (density_max + noise_bound)^4`` on any draw.
    """
    x = validate_positions(positions)
    cl, cr = boundary_coefficients(x.size)
    lp, rp, lv, ov, rv, lm, rm = _draw_probes(x, field, noise, rng)
    g = _imbalance(ov, lm, rm, cl, cr)
    cap = 64.0 * (field.density_max + noise.bound) ** 4
    assert float(g @ g) <= cap * (1.0 + 1e-9), "gradient estimate exceeded its norm cap"
    return g, ProbeSamples(lp, rp, lv, ov, rv)


def protocol_step(
    positions,
    field: DensityField,
    noise: NoiseModel,
    alpha: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Advance all agents one synchronous step of the coverage protocol.

    Every new position is computed from the time-t layout before any is
    applied.  The output is again nondecreasing in [0, 1]: each agent's move
    is capped at a quarter of the gap it moves into.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("stepsize alpha must lie in [0, 1]")
    x = validate_positions(positions)
    cl, cr = boundary_coefficients(x.size)
    _, _, _, ov, _, lm, rm = _draw_probes(x, field, noise, rng)
    g = _imbalance(ov, lm, rm, cl, cr)
    scale = alpha / (16.0 * (field.density_max + noise.bound) ** 2)
    return x - scale * g
