import math

import numpy as np
import pytest
from scipy.integrate import simpson

from physics.dephasing import (
    PhaseEnsemble,
    dephased_density_analytic,
    dephased_density_monte_carlo,
    sample_screen_hits,
    single_trial_density,
)
from physics.wavepacket import SampledFunction, default_grid, first_minimum, free_density, fringe_spacing
from utils.errors import ApproximationDomainError, DomainError

SMALL_GRID = (-60.0, 60.0, 257)


@pytest.mark.parametrize('kwargs', [
    {'gamma': 1.0, 'samples': 0},
    {'gamma': -1.0, 'samples': 10},
    {'gamma': math.inf, 'samples': 10},
    {'gamma': 1.0, 'samples': 10, 'seed': -1},
])
def test_phase_ensemble_domain(kwargs):
    with pytest.raises(DomainError):
        PhaseEnsemble(**kwargs)


def test_small_separation_is_rejected():
    with pytest.raises(ApproximationDomainError):
        dephased_density_analytic(2.0, 1.0, 30.0)
    with pytest.raises(ApproximationDomainError):
        single_trial_density(2.0, 0.5, 30.0)


@pytest.mark.parametrize('t', [0.0, 30.0])
@pytest.mark.parametrize('gamma', [0.0, 1.0, 2.0])
def test_analytic_average_is_normalized(gamma, t):
    x = np.linspace(*default_grid(5.0, t))
    assert simpson(dephased_density_analytic(5.0, gamma, t)(x), x=x) == pytest.approx(1.0, abs=1e-8)


def test_no_dephasing_is_the_free_density():
    x = np.linspace(*default_grid(5.0, 30.0, 1001))
    np.testing.assert_allclose(dephased_density_analytic(5.0, 0.0, 30.0)(x), free_density(5.0, 30.0)(x), atol=1e-15)


def test_total_dephasing_removes_fringes():
    x = np.linspace(*default_grid(5.0, 30.0, 1001))
    washed = dephased_density_analytic(5.0, math.inf, 30.0)(x)
    s2 = 901.0
    envelope = 0.5 * (np.exp(-(x - 5) ** 2 / s2) + np.exp(-(x + 5) ** 2 / s2)) / math.sqrt(math.pi * s2)
    np.testing.assert_allclose(washed, envelope, atol=1e-12)


@pytest.mark.parametrize('phi', [0.3, 1.0, math.pi / 2, 2.5])
def test_single_trial_is_normalized(phi):
    x = np.linspace(*default_grid(5.0, 30.0))
    assert simpson(single_trial_density(5.0, phi, 30.0)(x), x=x) == pytest.approx(1.0, abs=1e-8)


def test_opposite_phase_puts_a_minimum_in_the_centre():
    density = single_trial_density(5.0, math.pi, 30.0)
    assert density(0.0) == pytest.approx(0.0, abs=1e-12)
    assert density(first_minimum(5.0, 30.0)) > 0.01
    # without the phase the centre is a maximum
    assert single_trial_density(5.0, 0.0, 30.0)(0.0) > density(first_minimum(5.0, 30.0))


def test_averaging_damps_only_the_oscillation():
    t = 30.0
    period = fringe_spacing(5.0, t)
    x = np.linspace(-period / 2, period / 2, 2001)
    coherent = simpson(dephased_density_analytic(5.0, 0.0, t)(x), x=x) / period
    washed = simpson(dephased_density_analytic(5.0, 3.0, t)(x), x=x) / period
    assert washed == pytest.approx(coherent, abs=1e-3)


def test_zero_width_returns_the_analytic_density():
    result = dephased_density_monte_carlo(5.0, PhaseEnsemble(0.0, 10, seed=3), 30.0, grid=SMALL_GRID)
    expected = dephased_density_analytic(5.0, 0.0, 30.0)(result.density.x)
    np.testing.assert_array_equal(result.density.values, expected)
    assert not result.stderr.any()


def test_fixed_seed_is_bit_identical():
    ensemble = PhaseEnsemble(2.0, 3000, seed=42)
    first = dephased_density_monte_carlo(5.0, ensemble, 30.0, grid=SMALL_GRID)
    second = dephased_density_monte_carlo(5.0, ensemble, 30.0, grid=SMALL_GRID, chunk_size=256)
    np.testing.assert_array_equal(first.density.values, second.density.values)
    np.testing.assert_array_equal(first.stderr, second.stderr)
    third = dephased_density_monte_carlo(5.0, PhaseEnsemble(2.0, 3000, seed=43), 30.0, grid=SMALL_GRID)
    assert not np.array_equal(first.density.values, third.density.values)


def test_phase_draws_have_the_requested_width():
    phases = PhaseEnsemble(2.0, 50_000, seed=5).draw_phases()
    assert np.all(np.isfinite(phases))
    assert np.mean(phases) == pytest.approx(0.0, abs=0.05)
    assert np.std(phases) == pytest.approx(2.0, abs=0.05)


def test_monte_carlo_matches_average_small():
    result = dephased_density_monte_carlo(5.0, PhaseEnsemble(2.0, 4000, seed=11), 30.0, grid=SMALL_GRID)
    expected = dephased_density_analytic(5.0, 2.0, 30.0)(result.density.x)
    assert np.all(np.abs(result.density.values - expected) <= 4.0 * result.stderr + 1e-15)


@pytest.mark.slow
def test_monte_carlo_matches_average_full():
    result = dephased_density_monte_carlo(5.0, PhaseEnsemble(2.0, 100_000, seed=20240601), 30.0)
    expected = dephased_density_analytic(5.0, 2.0, 30.0)(result.density.x)
    assert np.all(np.abs(result.density.values - expected) <= 4.0 * result.stderr + 1e-15)
    assert result.density.integrate() == pytest.approx(1.0, abs=1e-6)


def test_screen_hits_follow_the_density():
    x = np.linspace(*default_grid(5.0, 0.0))
    density = SampledFunction(x[0], x[-1], free_density(5.0, 0.0)(x))
    hits = sample_screen_hits(density, 20_000, seed=9)
    assert np.array_equal(hits, sample_screen_hits(density, 20_000, seed=9))
    assert np.mean(np.abs(hits)) == pytest.approx(5.0, abs=0.05)
    assert np.mean(hits) == pytest.approx(0.0, abs=0.2)
    assert sample_screen_hits(density, 0).size == 0
    with pytest.raises(DomainError):
        sample_screen_hits(density.with_values(np.zeros(density.n)), 10)


def test_quarter_turn_shifts_fringes_by_a_quarter_spacing():
    L, t = 20.0, 30.0
    spacing = fringe_spacing(L, t)
    x = np.linspace(-spacing / 2, spacing / 2, 20001)
    assert x[np.argmax(single_trial_density(L, 0.0, t)(x))] == pytest.approx(0.0, abs=1e-3)
    # phase on the left packet moves the central maximum to the left
    shifted = x[np.argmax(single_trial_density(L, math.pi / 2, t)(x))]
    assert shifted == pytest.approx(-spacing / 4, abs=0.01)


def test_monte_carlo_error_falls_as_inverse_square_root():
    grid = (-1.0, 1.0, 3)
    expected = dephased_density_analytic(5.0, 2.0, 30.0)(0.0)
    rms = []
    for samples in (100, 1000, 10_000):
        errors = [
            dephased_density_monte_carlo(5.0, PhaseEnsemble(2.0, samples, seed=seed), 30.0, grid=grid).density.values[1]
            - expected
            for seed in range(20)
        ]
        rms.append(math.sqrt(np.mean(np.square(errors))))
    for coarse, fine in zip(rms, rms[1:]):
        assert math.sqrt(10) / 3 <= coarse / fine <= 3 * math.sqrt(10)
