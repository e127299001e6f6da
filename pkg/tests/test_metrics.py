import numpy as np
import pytest

from linecover import (
    ConstantDensity,
    AffineDensity,
    coverage_radius,
    coverage_radius_grid,
    gap_energy,
    gap_energy_gradient,
    mass_hessian_min_eig,
    optimal_positions,
    validate_positions,
)

from conftest import field_catalog, random_layout

CONST = ConstantDensity(1.0)
AFFINE = AffineDensity(1.0, 1.0)


def test_validate_positions():
    out = validate_positions([0.1, 0.5, 0.5, 0.9])
    assert out.dtype == float and out.shape == (4,)
    for bad in ([], [0.5, 0.4], [-0.1], [1.1], [0.3, float("nan")]):
        with pytest.raises(ValueError):
            validate_positions(bad)


def test_coverage_radius_examples():
    assert coverage_radius([0.25, 0.75], CONST) == pytest.approx(0.25)
    assert coverage_radius([0.1, 0.5], CONST) == pytest.approx(0.5)
    assert coverage_radius([0.5], AFFINE) == pytest.approx(0.875)


def test_coverage_radius_grid_examples():
    assert coverage_radius_grid([0.25, 0.75], CONST, 1001) == pytest.approx(0.25, abs=1e-3)
    assert coverage_radius_grid([0.1, 0.5], CONST, 1001) == pytest.approx(0.5, abs=1e-3)
    assert coverage_radius_grid([0.5], AFFINE, 10_001) == pytest.approx(0.875, abs=1e-3)
    with pytest.raises(ValueError):
        coverage_radius_grid([0.5], CONST, 1)


def test_coverage_radius_matches_grid_oracle(rng):
    grid = 10_001
    for field in field_catalog().values():
        allowed = 2.0 * field.total_mass / grid
        for n in (1, 2, 4, 9):
            for _ in range(5):
                x = random_layout(rng, n)
                assert abs(
                    coverage_radius(x, field) - coverage_radius_grid(x, field, grid)
                ) <= allowed


def test_gap_energy_examples():
    assert gap_energy([0.25, 0.75], CONST) == pytest.approx(0.5)
    assert gap_energy([0.5], CONST) == pytest.approx(1.0)
    assert gap_energy([0.2, 0.6], CONST) == pytest.approx(0.56)


def test_gap_energy_is_one_over_n_at_uniform_optimum():
    for n in range(1, 21):
        x_star = optimal_positions(CONST, n)
        assert gap_energy(x_star, CONST) == pytest.approx(1.0 / n, abs=1e-10)


def test_gap_energy_minimized_at_optimum(rng):
    for field in field_catalog().values():
        for n in (1, 3, 6):
            x_star = optimal_positions(field, n)
            base = gap_energy(x_star, field)
            for _ in range(50):
                delta = 0.2 * (rng.random(n) - 0.5)
                x = np.sort(np.clip(x_star + delta, 0.0, 1.0))
                if np.max(np.abs(x - x_star)) < 1e-6:
                    continue
                assert gap_energy(x, field) > base


def test_gradient_examples():
    assert gap_energy_gradient([0.25, 0.75], CONST) == pytest.approx([0.0, 0.0], abs=1e-12)
    assert gap_energy_gradient([0.2, 0.6], CONST) == pytest.approx([0.0, -0.8], abs=1e-12)
    assert gap_energy_gradient([0.5], CONST) == pytest.approx([0.0], abs=1e-12)


def _fd_gradient(x, field, h=1e-6):
    g = np.empty(x.size)
    for k in range(x.size):
        up = x.copy()
        dn = x.copy()
        up[k] += h
        dn[k] -= h
        g[k] = (gap_energy(up, field) - gap_energy(dn, field)) / (2.0 * h)
    return g


def spaced_layout(rng, n, min_gap=1e-3):
    """Interior layout whose gaps survive finite-difference perturbation."""
    while True:
        x = random_layout(rng, n, lo=0.01, hi=0.99)
        bounds = np.r_[0.0, x, 1.0]
        if np.all(np.diff(bounds) > min_gap):
            return x


def test_gradient_matches_finite_differences(rng):
    for field in field_catalog().values():
        for n in (1, 2, 5, 9):
            for _ in range(10):
                x = spaced_layout(rng, n)
                exact = gap_energy_gradient(x, field)
                approx = _fd_gradient(x, field)
                scale = max(float(np.linalg.norm(exact)), 1e-3)
                assert np.linalg.norm(approx - exact) / scale <= 1e-5


def test_mass_hessian_min_eig_exact_small_n():
    assert mass_hessian_min_eig(1) == pytest.approx(8.0, abs=1e-9)
    assert mass_hessian_min_eig(2) == pytest.approx(4.0, abs=1e-9)
    assert mass_hessian_min_eig(3) == pytest.approx(2.0, abs=1e-9)
    with pytest.raises(ValueError):
        mass_hessian_min_eig(0)


def test_mass_hessian_min_eig_matches_dense_solver_and_bound():
    for n in range(1, 51):
        lam = mass_hessian_min_eig(n)
        assert lam >= 2.0 / (n * n) - 1e-12
        if n == 1:
            dense = np.array([[8.0]])
        else:
            dense = np.diag(np.r_[6.0, np.full(n - 2, 4.0), 6.0])
            dense += np.diag(np.full(n - 1, -2.0), 1) + np.diag(np.full(n - 1, -2.0), -1)
        assert lam == pytest.approx(np.linalg.eigvalsh(dense)[0], abs=1e-9)
