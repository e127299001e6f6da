#!/usr/bin/env python3
"""Expected-error decay against the closed-form guarantee.

Runs an ensemble of seeded trajectories with the guarantee-backed stepsize
(gain/(gain + t)), compares the mean squared distance to the optimum with
the closed-form ceiling, and fits the tail decay rate, which should sit
near 1/t (log-log slope about -1).  The guarantee is deliberately loose, so
expect several orders of magnitude of slack.  Pass --full for the 20-seed,
1e5-iteration experiment (about half a minute); the default is a quicker
8-seed, 2e4-iteration version.
"""

import argparse

import numpy as np

from linecover import (
    ConstantDensity,
    NoiseModel,
    SimConfig,
    StepSchedule,
    ensemble,
    expected_error_bound,
    fit_tail_slope,
)

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("--full", action="store_true", help="20 seeds and 1e5 iterations")
parser.add_argument("--plot", action="store_true", help="save error_decay.png")
args = parser.parse_args()

n, u, m = 5, 5, 0.5
iters = 100_000 if args.full else 20_000
num_seeds = 20 if args.full else 8
field = ConstantDensity(1.0)

config = SimConfig(
    n=n,
    iters=iters,
    seed=6000,
    field=field,
    noise=NoiseModel("uniform", m),
    schedule=StepSchedule.theorem(u, field.density_max, m),
    init="uniform-random",
    record_every=max(iters // 1000, 1),
)
print(f"{num_seeds} seeds, {iters} iterations, n={n}, u={u}, noise bound {m}")
curve = ensemble(config, seeds=range(6000, 6000 + num_seeds))
bound = expected_error_bound(n, u, field.density_max, m, field.slope_max, curve.times)

print(f"{'t':>8s} {'mean err':>12s} {'stderr':>10s} {'ceiling':>12s} {'slack':>9s}")
shown = sorted({int(np.searchsorted(curve.times, t)) for t in np.geomspace(1, iters, 8)})
for i in shown:
    slack = bound[i] / max(curve.mean_sq_error[i], 1e-300)
    print(
        f"{curve.times[i]:>8d} {curve.mean_sq_error[i]:>12.3e} {curve.stderr[i]:>10.2e}"
        f" {bound[i]:>12.3e} {slack:>8.0f}x"
    )

held = bool(np.all(curve.mean_sq_error <= bound + 2 * curve.stderr))
slope = fit_tail_slope(curve.times, curve.mean_sq_error, tail_fraction=0.5)
print(f"\nceiling held at every recorded step: {held}")
print(f"tail log-log slope: {slope:.3f} (1/t decay shows up as -1)")

if args.plot:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.5, 4.2))
    keep = curve.times > 0
    ax.loglog(curve.times[keep], curve.mean_sq_error[keep], label="ensemble mean")
    ax.loglog(curve.times[keep], bound[keep], "--", label="guarantee ceiling")
    ax.set_xlabel("iteration")
    ax.set_ylabel("mean squared error per agent")
    ax.legend()
    fig.tight_layout()
    fig.savefig("error_decay.png", dpi=150)
    print("wrote error_decay.png")
