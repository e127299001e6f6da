import numpy as np
import pytest

from linecover import (
    ConstantDensity,
    NoiseModel,
    StepSchedule,
    gap_energy_gradient,
    protocol_step,
    sample_density,
    stochastic_gradient,
)
from linecover.verify import mc_gradient_stats

from conftest import field_catalog, random_layout

CONST = ConstantDensity(1.0)
ZERO = NoiseModel("zero", 0.0)


# ---------------------------------------------------------------- noise model


def test_noise_model_validation():
    NoiseModel("uniform", 1.0)
    with pytest.raises(ValueError):
        NoiseModel("uniform", 1.5)
    with pytest.raises(ValueError):
        NoiseModel("uniform", -0.1)
    with pytest.raises(ValueError):
        NoiseModel("gaussian", 0.5)


def test_noise_support_and_mean(rng):
    for kind in ("uniform", "bernoulli"):
        noise = NoiseModel(kind, 0.5)
        draws = noise.samples(rng, 200_000)
        assert np.all(np.abs(draws) <= 0.5 + 1e-15)
        stderr = draws.std() / np.sqrt(draws.size)
        assert abs(draws.mean()) <= 4.0 * stderr
    assert np.all(NoiseModel("zero", 0.0).samples(rng, 100) == 0.0)


def test_zero_noise_consumes_no_draws():
    a = np.random.default_rng(5)
    b = np.random.default_rng(5)
    NoiseModel("zero", 0.0).samples(a, (3, 3))
    assert a.random() == b.random()


# ------------------------------------------------------------ density samples


def test_sample_density_examples(rng):
    assert sample_density(CONST, ZERO, 0.3, rng) == 1.0
    affine = field_catalog()["affine"]
    assert sample_density(affine, ZERO, 1.0, rng) == 2.0

    noise = NoiseModel("uniform", 0.5)
    draws = np.array([sample_density(CONST, noise, 0.3, rng) for _ in range(100_000)])
    assert np.all((draws >= 0.5) & (draws <= 1.5))
    stderr = draws.std() / np.sqrt(draws.size)
    assert draws.mean() == pytest.approx(1.0, abs=3.0 * stderr)


def test_sampled_density_stays_nonnegative(rng):
    # bound <= 1 plus density >= 1 keeps every sample nonnegative
    for field in field_catalog().values():
        noise = NoiseModel("uniform", 1.0)
        z = rng.random(10_000)
        assert np.all(sample_density(field, noise, z, rng) >= 0.0)


# --------------------------------------------------------- gradient estimates


def test_gradient_estimate_noiseless_examples(rng):
    g, _ = stochastic_gradient([0.25, 0.75], CONST, ZERO, rng)
    assert g == pytest.approx([0.0, 0.0], abs=1e-12)
    # matches the exact gradient whenever density is constant and noise is off
    g, _ = stochastic_gradient([0.2, 0.6], CONST, ZERO, rng)
    assert g == pytest.approx([0.0, -0.8], abs=1e-12)
    g, _ = stochastic_gradient([0.5], CONST, ZERO, rng)
    assert g == pytest.approx([0.0], abs=1e-12)


def test_gradient_estimate_probe_layout(rng):
    x = np.array([0.2, 0.5, 0.9])
    g, probes = stochastic_gradient(x, CONST, ZERO, rng)
    assert probes.left_points.shape == probes.right_points.shape == (3,)
    assert np.all((probes.left_points >= np.r_[0.0, x[:-1]]) & (probes.left_points <= x))
    assert np.all((probes.right_points >= x) & (probes.right_points <= np.r_[x[1:], 1.0]))
    assert probes.own_values == pytest.approx([1.0, 1.0, 1.0])


def test_gradient_norm_cap(rng):
    for field in field_catalog().values():
        for noise in (NoiseModel("uniform", 0.5), NoiseModel("bernoulli", 1.0)):
            cap = 64.0 * (field.density_max + noise.bound) ** 4
            for n in (1, 2, 5, 20):
                for _ in range(50):
                    g, _ = stochastic_gradient(random_layout(rng, n), field, noise, rng)
                    assert float(g @ g) <= cap * (1.0 + 1e-9)


def test_gradient_estimate_unbiased(rng):
    # Monte Carlo mean against the exact energy gradient, four-standard-error band
    draws = 150_000
    for family in ("constant", "smooth-bump"):
        field = field_catalog()[family]
        for bound in (0.0, 0.5):
            noise = NoiseModel("uniform" if bound else "zero", bound)
            for n in (2, 5):
                x = random_layout(rng, n)
                exact = gap_energy_gradient(x, field)
                mean, stderr, max_sq = mc_gradient_stats(x, field, noise, rng, draws)
                tol = 4.0 * stderr + 1e-12 * np.maximum(1.0, np.abs(exact))
                assert np.all(np.abs(mean - exact) <= tol)
                assert max_sq <= 64.0 * (field.density_max + bound) ** 4


# ---------------------------------------------------------------- step update


def test_protocol_step_examples(rng):
    assert protocol_step([0.2, 0.6], CONST, ZERO, 1.0, rng) == pytest.approx([0.2, 0.65])
    assert protocol_step([0.5, 0.5], CONST, ZERO, 1.0, rng) == pytest.approx([0.375, 0.625])
    x = random_layout(rng, 6)
    assert protocol_step(x, CONST, NoiseModel("uniform", 0.5), 0.0, rng) == pytest.approx(x)


def test_protocol_step_rejects_bad_alpha(rng):
    with pytest.raises(ValueError):
        protocol_step([0.5], CONST, ZERO, 1.5, rng)
    with pytest.raises(ValueError):
        protocol_step([0.5], CONST, ZERO, -0.1, rng)


def test_protocol_step_preserves_order(rng):
    bump = field_catalog()["smooth-bump"]
    noise = NoiseModel("bernoulli", 1.0)
    for n in (1, 2, 5, 20):
        x = random_layout(rng, n)
        for _ in range(300):
            x_next = protocol_step(x, bump, noise, rng.random(), rng)
            assert x_next[0] >= 0.0 and x_next[-1] <= 1.0
            assert np.all(np.diff(x_next) >= 0.0)
            x = x_next


def test_protocol_step_quarter_gap_move_cap(rng):
    field = field_catalog()["piecewise-linear"]
    noise = NoiseModel("uniform", 0.5)
    for _ in range(200):
        x = random_layout(rng, 5)
        x_next = protocol_step(x, field, noise, 1.0, rng)
        move = x_next - x
        gap_l = x - np.r_[0.0, x[:-1]]
        gap_r = np.r_[x[1:], 1.0] - x
        assert np.all(move <= 0.25 * gap_r + 1e-15)
        assert np.all(-move <= 0.25 * gap_l + 1e-15)


def test_degenerate_gap_probes_at_shared_endpoint(rng):
    # coincident agents sample the shared endpoint and see a zero gap mass
    x = np.array([0.4, 0.4])
    g, probes = stochastic_gradient(x, CONST, ZERO, rng)
    assert probes.right_points[0] == 0.4 and probes.left_points[1] == 0.4
    # right mass of agent 1 and left mass of agent 2 are both zero
    assert g == pytest.approx([4.0 * 0.4, -4.0 * 0.6])


# ------------------------------------------------------------- step schedules


def test_theorem_schedule_values():
    sched = StepSchedule.theorem(2, 1.0, 0.5)
    assert sched.gain == pytest.approx(72.0)
    assert sched.stepsize(0) == pytest.approx(1.0)
    assert sched.stepsize(72) == pytest.approx(0.5)


def test_hybrid_schedule_values():
    sched = StepSchedule.hybrid(1000)
    assert sched.stepsize(0) == 1.0
    assert sched.stepsize(499) == 1.0
    assert sched.stepsize(500) == pytest.approx(1.0 / np.sqrt(500.0))
    assert sched.stepsize(800) == pytest.approx(1.0 / np.sqrt(800.0))


def test_power_schedule_values():
    sched = StepSchedule.power(1.0)
    assert sched.stepsize(0) == 1.0
    assert sched.stepsize(1) == 0.5
    sched = StepSchedule.power(0.6)
    assert sched.stepsize(9) == pytest.approx(10.0**-0.6)


def test_schedule_parameter_validation():
    with pytest.raises(ValueError):
        StepSchedule.theorem(0.5, 1.0, 0.0)
    with pytest.raises(ValueError):
        StepSchedule.power(0.5)
    with pytest.raises(ValueError):
        StepSchedule.power(1.2)
    with pytest.raises(ValueError):
        StepSchedule.hybrid(1)
    with pytest.raises(ValueError):
        StepSchedule.theorem(2, 1.0, 0.0).stepsize(-1)


def test_schedules_stay_in_unit_interval():
    schedules = [
        StepSchedule.theorem(5, 3.0, 1.0),
        StepSchedule.power(0.75),
        StepSchedule.hybrid(10_000),
    ]
    ts = np.unique(np.geomspace(1, 10_000_000, 60).astype(int))
    for sched in schedules:
        alphas = [sched.stepsize(int(t)) for t in [0, *ts]]
        assert all(0.0 <= a <= 1.0 for a in alphas)


def test_summable_square_conditions():
    # theorem and power schedules: partial sums of alpha grow without bound
    # while partial sums of alpha^2 level off
    for sched in (StepSchedule.theorem(2, 1.0, 0.5), StepSchedule.power(0.75)):
        t = np.arange(200_000)
        if sched.kind == "theorem":
            alpha = sched.gain / (sched.gain + t)
        else:
            alpha = (t + 1.0) ** -sched.p
        assert alpha.sum() > 50.0 * alpha[0]
        tail = (alpha[100_000:] ** 2).sum()
        head = (alpha[:100_000] ** 2).sum()
        assert tail < 0.05 * head
