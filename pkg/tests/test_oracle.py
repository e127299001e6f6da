import math

import numpy as np
import pytest

from linecover import (
    AffineDensity,
    ConstantDensity,
    balance_residuals,
    certify_optimal,
    coverage_radius,
    gap_energy,
    gap_energy_gradient,
    gradient_dominance,
    optimal_coverage_radius,
    optimal_positions,
)

from conftest import field_catalog, random_layout

CONST = ConstantDensity(1.0)
AFFINE = AffineDensity(1.0, 1.0)


def test_optimal_positions_examples():
    assert optimal_positions(CONST, 4) == pytest.approx([0.125, 0.375, 0.625, 0.875], abs=1e-11)
    assert optimal_positions(AFFINE, 1) == pytest.approx([math.sqrt(2.5) - 1.0], abs=1e-11)
    assert optimal_positions(AFFINE, 2) == pytest.approx(
        [math.sqrt(1.75) - 1.0, math.sqrt(3.25) - 1.0], abs=1e-11
    )


def test_optimal_positions_uniform_closed_form():
    for n in (1, 2, 7, 20):
        expected = (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)
        assert optimal_positions(CONST, n) == pytest.approx(expected, abs=1e-11)


def test_optimal_positions_monotone_and_balanced():
    for field in field_catalog().values():
        for n in (1, 2, 5, 12):
            x = optimal_positions(field, n)
            if n > 1:
                assert np.all(np.diff(x) > 0.0)
            assert np.max(np.abs(balance_residuals(x, field))) <= 1e-10


def test_optimal_coverage_radius():
    assert optimal_coverage_radius(CONST, 2) == pytest.approx(0.25)
    assert optimal_coverage_radius(AFFINE, 3) == pytest.approx(0.25)
    assert optimal_coverage_radius(CONST, 10) == pytest.approx(0.05)
    for field in field_catalog().values():
        for n in (1, 4, 9):
            assert coverage_radius(optimal_positions(field, n), field) == pytest.approx(
                optimal_coverage_radius(field, n), abs=1e-10
            )


def test_optimum_beats_random_layouts(rng):
    for field in field_catalog().values():
        for n in (2, 5):
            best = coverage_radius(optimal_positions(field, n), field)
            for _ in range(250):
                assert best <= coverage_radius(random_layout(rng, n), field) + 1e-12


def test_balance_residual_examples():
    assert balance_residuals([0.25, 0.75], CONST) == pytest.approx([0.0, 0.0], abs=1e-12)
    assert balance_residuals([0.25, 0.5], CONST) == pytest.approx([0.25, -0.75])
    assert balance_residuals([0.5], CONST) == pytest.approx([0.0], abs=1e-12)


def test_gradient_dominance_examples():
    result = gradient_dominance([0.2, 0.6], CONST)
    assert result.ratio == pytest.approx(0.64 / 0.06, rel=1e-9)
    assert result.bound == pytest.approx(1.0)
    assert result.passed and not result.at_optimum

    assert gradient_dominance([0.3, 0.7], CONST).passed

    x_star = optimal_positions(CONST, 2)
    nudged = x_star + 1e-13
    result = gradient_dominance(nudged, CONST)
    assert result.at_optimum and math.isnan(result.ratio)


def test_gradient_dominance_random_layouts(rng):
    for field in field_catalog().values():
        for n in (1, 2, 5, 10):
            for _ in range(100):
                result = gradient_dominance(random_layout(rng, n), field)
                assert result.at_optimum or result.passed


def test_unit_sphere_gap_form_lower_bound(rng):
    # minimum of x1^2 + sum (x_{i+1} - x_i)^2 + xn^2 over random unit vectors
    for n in range(2, 21):
        v = rng.standard_normal((2_000, n))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        diffs = np.diff(v, axis=1)
        form = v[:, 0] ** 2 + (diffs * diffs).sum(axis=1) + v[:, -1] ** 2
        assert form.min() >= 1.0 / (n * n)


def test_certify_optimal_report():
    for field in field_catalog().values():
        report = certify_optimal(field, 5, tol=1e-9)
        assert np.max(np.abs(report.residuals)) <= report.tol
        assert report.coverage == pytest.approx(optimal_coverage_radius(field, 5), abs=1e-9)
        assert report.positions.shape == (5,)


def test_dominance_consistency_with_energy(rng):
    # the reported ratio really is |grad|^2 over the energy excess
    field = field_catalog()["smooth-bump"]
    x = random_layout(rng, 4)
    x_star = optimal_positions(field, 4)
    expected = float(
        np.dot(gap_energy_gradient(x, field), gap_energy_gradient(x, field))
        / (gap_energy(x, field) - gap_energy(x_star, field))
    )
    assert gradient_dominance(x, field).ratio == pytest.approx(expected, rel=1e-12)
