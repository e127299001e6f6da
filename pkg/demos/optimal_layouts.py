#!/usr/bin/env python3
"""Exact optimal layouts from the balance conditions.

The optimal layout gives every agent an equal share of the cumulative mass
(half-shares at the boundaries).  This script solves those conditions for
each density family, certifies them through the balance residuals, and shows
how much worse random layouts cover the interval.
"""

import numpy as np

from linecover import (
    BumpDensity,
    ConstantDensity,
    PiecewiseLinearDensity,
    certify_optimal,
    coverage_radius,
    gradient_dominance,
    optimal_coverage_radius,
)

rng = np.random.default_rng(7)

fields = [
    ConstantDensity(level=1.0),
    PiecewiseLinearDensity(breakpoints=(0.0, 0.25, 0.6, 1.0), values=(1.0, 2.0, 1.2, 1.8)),
    BumpDensity(amplitude=2.0, center=0.5, width=0.1),
]

n = 5
for field in fields:
    report = certify_optimal(field, n)
    print(f"{field.family}: optimal layout for {n} agents")
    print("  x*          =", " ".join(f"{v:.5f}" for v in report.positions))
    print(f"  coverage    = {report.coverage:.6f} (formula total/(2n) = {optimal_coverage_radius(field, n):.6f})")
    print(f"  max residual= {np.max(np.abs(report.residuals)):.2e}")
    random_radii = [coverage_radius(np.sort(rng.random(n)), field) for _ in range(2000)]
    print(f"  best of 2000 random layouts = {min(random_radii):.6f}  (median {np.median(random_radii):.6f})")
    print()

print("agents crowd into the heavy region: optimal gaps under the bump field")
bump = fields[-1]
x = certify_optimal(bump, 9).positions
gaps = np.diff(np.r_[0.0, x, 1.0])
print("  positions:", " ".join(f"{v:.3f}" for v in x))
print("  gaps     :", " ".join(f"{v:.3f}" for v in gaps), "(narrow near z=0.5)")

print("\ngradient dominance away from the optimum (ratio stays above 4/n^2)")
for _ in range(5):
    layout = np.sort(rng.random(n))
    result = gradient_dominance(layout, bump)
    print(f"  ratio={result.ratio:9.3f}  bound={result.bound:.3f}  pass={result.passed}")
