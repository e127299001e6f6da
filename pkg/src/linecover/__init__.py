"""Randomized coverage of [0, 1] by mobile agents with noisy density samples.

The package simulates a distributed protocol in which each agent repeatedly
takes three noisy measurements of a density field near its position and
nudges itself toward balancing the weighted gaps to its neighbors.  It also
computes the exact optimal layout as a verification oracle and ships the
experiment machinery (seeded runs, ensembles, error-decay fits) used to
check the protocol's convergence behavior.
"""

from .density import (
    AffineDensity,
    BumpDensity,
    ConstantDensity,
    DensityField,
    PiecewiseLinearDensity,
    adaptive_simpson,
    make_field,
)
from .metrics import (
    coverage_radius,
    coverage_radius_grid,
    gap_energy,
    gap_energy_gradient,
    mass_hessian_min_eig,
    validate_positions,
)
from .oracle import (
    DominanceResult,
    OptimalityReport,
    balance_residuals,
    certify_optimal,
    gradient_dominance,
    optimal_coverage_radius,
    optimal_positions,
)
from .protocol import (
    NoiseModel,
    ProbeSamples,
    StepSchedule,
    protocol_step,
    sample_density,
    stochastic_gradient,
)
from .sim import (
    EnsembleCurve,
    RunRecord,
    SimConfig,
    ensemble,
    expected_error_bound,
    fit_tail_slope,
    run,
)

__version__ = "0.1.0"

__all__ = [
    "AffineDensity",
    "BumpDensity",
    "ConstantDensity",
    "DensityField",
    "PiecewiseLinearDensity",
    "adaptive_simpson",
    "make_field",
    "coverage_radius",
    "coverage_radius_grid",
    "gap_energy",
    "gap_energy_gradient",
    "mass_hessian_min_eig",
    "validate_positions",
    "DominanceResult",
    "OptimalityReport",
    "balance_residuals",
    "certify_optimal",
    "gradient_dominance",
    "optimal_coverage_radius",
    "optimal_positions",
    "NoiseModel",
    "ProbeSamples",
    "StepSchedule",
    "protocol_step",
    "sample_density",
    "stochastic_gradient",
    "EnsembleCurve",
    "RunRecord",
    "SimConfig",
    "ensemble",
    "expected_error_bound",
    "fit_tail_slope",
    "run",
    "__version__",
]
