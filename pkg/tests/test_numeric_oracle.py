import math

import numpy as np
import pytest

from physics.numeric_oracle import (
    GridSpec,
    adaptive_integrate,
    hermitian_2x2_eigenvalues,
    momentum_grid,
    spectral_propagate,
)
from physics.states import QubitState, Spectrum
from physics.wavepacket import GaussianTerm, SampledFunction, evaluate_terms, free_evolve, initial_wavefunction
from utils.errors import DomainError, GridTooSmallError, QuadratureError


@pytest.mark.parametrize('n', [128, 1000, 4095])
def test_grid_spec_needs_power_of_two(n):
    with pytest.raises(GridTooSmallError):
        GridSpec(-10.0, 10.0, n)


def test_momentum_grid_is_signed():
    p = momentum_grid(8, 0.5)
    assert p[0] == 0.0
    assert p[1] == pytest.approx(2 * math.pi / 4.0)
    assert p[-1] == pytest.approx(-2 * math.pi / 4.0)


def test_zero_time_is_identity(psi0_on_oracle_grid):
    evolved = spectral_propagate(psi0_on_oracle_grid, 0.0)
    np.testing.assert_allclose(evolved.values, psi0_on_oracle_grid.values, atol=1e-14, rtol=0)


def test_single_gaussian_matches_closed_form(oracle_grid):
    packet = [GaussianTerm(math.pi ** -0.25, 0.0)]
    psi = oracle_grid.sample(lambda x: evaluate_terms(packet, x))
    evolved = spectral_propagate(psi, 1.0)
    expected = evaluate_terms(free_evolve(packet, 1.0), oracle_grid.x)
    assert np.max(np.abs(evolved.values - expected)) < 1e-8


@pytest.mark.parametrize('t', [1.0, 10.0, 30.0])
def test_double_slit_matches_free_evolve(psi0_on_oracle_grid, oracle_grid, t):
    evolved = spectral_propagate(psi0_on_oracle_grid, t)
    expected = evaluate_terms(free_evolve(initial_wavefunction(5.0), t), oracle_grid.x)
    assert np.max(np.abs(evolved.values - expected)) < 1e-6


def test_propagation_is_unitary_on_the_grid(psi0_on_oracle_grid):
    before = np.sum(np.abs(psi0_on_oracle_grid.values) ** 2)
    after = np.sum(np.abs(spectral_propagate(psi0_on_oracle_grid, 30.0).values) ** 2)
    assert after == pytest.approx(before, rel=1e-12)


def test_refining_the_grid_does_not_hurt():
    terms = initial_wavefunction(5.0)
    expected = free_evolve(terms, 10.0)
    errors = []
    for n in (2048, 4096, 8192):
        grid = GridSpec(-160.0, 160.0, n)
        psi = grid.sample(lambda x: evaluate_terms(terms, x))
        errors.append(np.max(np.abs(spectral_propagate(psi, 10.0).values - evaluate_terms(expected, grid.x))))
    assert errors[-1] <= errors[0] + 1e-12
    assert errors[-1] < 1e-10


def test_narrow_grid_is_rejected():
    grid = GridSpec(-10.0, 10.0, 256)
    psi = grid.sample(lambda x: evaluate_terms(initial_wavefunction(5.0), x))
    with pytest.raises(GridTooSmallError):
        spectral_propagate(psi, 1.0)


def test_negative_time_is_rejected(psi0_on_oracle_grid):
    with pytest.raises(DomainError):
        spectral_propagate(psi0_on_oracle_grid, -1.0)


def test_integrate_polynomial():
    value, error = adaptive_integrate(lambda x: x * x, 0.0, 1.0)
    assert value == pytest.approx(1.0 / 3.0, abs=1e-12)
    assert error < 1e-10


@pytest.mark.parametrize('width, center', [(1.0, 0.0), (0.3, 2.0), (4.0, -3.0)])
def test_error_estimates_are_honest(width, center):
    value, error = adaptive_integrate(
        lambda x: math.exp(-(x - center) ** 2 / (2 * width * width)), -60.0, 60.0, points=[center]
    )
    true = width * math.sqrt(2 * math.pi)
    assert abs(value - true) <= max(1e-10, error)


def test_non_convergence_reports_best_estimate():
    with pytest.raises(QuadratureError) as info:
        adaptive_integrate(lambda x: math.sin(50.0 * x), 0.0, 100.0, tol=1e-12, limit=1)
    assert math.isfinite(info.value.estimate)
    assert info.value.exit_code == 3


def test_integrate_rejects_bad_tolerance():
    with pytest.raises(DomainError):
        adaptive_integrate(lambda x: x, 0.0, 1.0, tol=0.0)


@pytest.mark.parametrize('matrix, expected', [
    ([[0.5, 0.0], [0.0, 0.5]], (0.5, 0.5)),
    ([[0.5, 0.5], [0.5, 0.5]], (1.0, 0.0)),
    ([[0.5, 0.30745], [0.30745, 0.5]], (0.80745, 0.19255)),
])
def test_two_by_two_eigenvalues(matrix, expected):
    spectrum = hermitian_2x2_eigenvalues(QubitState.from_matrix(matrix))
    assert spectrum.eigenvalues == pytest.approx(expected, abs=1e-12)
    assert sum(spectrum.eigenvalues) == pytest.approx(1.0, abs=1e-12)


def test_eigenvalues_of_complex_coherence():
    state = QubitState(0.7, 0.1 + 0.2j, 0.1 - 0.2j, 0.3)
    expected = sorted(np.linalg.eigvalsh(state.as_matrix()), reverse=True)
    assert hermitian_2x2_eigenvalues(state).eigenvalues == pytest.approx(expected, abs=1e-12)


def test_non_hermitian_state_is_rejected():
    with pytest.raises(DomainError):
        QubitState(0.5, 0.1, 0.2, 0.5)
    with pytest.raises(DomainError):
        QubitState(0.6, 0.0, 0.0, 0.6)


def test_spectrum_checks():
    assert Spectrum((0.2, 0.8)).eigenvalues == (0.8, 0.2)
    assert Spectrum.of_pair(1.0 + 1e-15).eigenvalues == (1.0, 0.0)
    with pytest.raises(DomainError):
        Spectrum((0.7, 0.7))
    with pytest.raises(DomainError):
        Spectrum((1.5, -0.5))


def test_sampled_inner_product_needs_shared_grid():
    a = SampledFunction(0.0, 1.0, np.ones(5))
    b = SampledFunction(0.0, 2.0, np.ones(5))
    with pytest.raises(DomainError):
        a.inner_product(b)
