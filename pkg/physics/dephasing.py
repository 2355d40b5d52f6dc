"""
Dephasing: a random relative phase between the two slit packets, drawn anew each trial.

A single trial prepares A'[e^{i phi} g(x+L) + g(x-L)] and is fully coherent; the
interference only washes out in the ensemble average. For a Gaussian phase of
width gamma the average damps the oscillation term by exp(-gamma^2 / 2).
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.special import ndtri

from utils.errors import ApproximationDomainError, DomainError
from .wavepacket import (
    DensityFunction,
    SampledFunction,
    default_grid,
    free_log_prefactor,
    fringe_density,
)

MIN_L = 3.0
DEFAULT_CHUNK = 256
UNIFORM_BITS = 53


def _check_inputs(L: float, t: float):
    if not math.isfinite(L) or L < MIN_L:
        raise ApproximationDomainError(f"Dephasing densities need L >= {MIN_L}, got L={L}")
    if not math.isfinite(t) or t < 0:
        raise DomainError(f"Time must be finite and non-negative, got t={t}")


@dataclass(frozen=True)
class PhaseEnsemble:
    """Gaussian phase distribution (mean 0, width gamma) and its sampling plan"""
    gamma: float
    samples: int
    seed: int = 0

    def __post_init__(self):
        if not math.isfinite(self.gamma) or self.gamma < 0:
            raise DomainError(f"Phase width must be finite and >= 0, got gamma={self.gamma}")
        if self.samples < 1:
            raise DomainError(f"Monte Carlo needs at least one sample, got {self.samples}")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError(f"Seed must be an unsigned 64-bit integer, got {self.seed}")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed))

    def draw_phases(self) -> np.ndarray:
        """Phases by inverse-CDF transform of open-interval uniforms (no rejection step)"""
        rng = self.generator()
        raw = rng.integers(0, 2 ** UNIFORM_BITS, size=self.samples, dtype=np.uint64)
        uniforms = (raw.astype(np.float64) + 0.5) / 2.0 ** UNIFORM_BITS
        return self.gamma * ndtri(uniforms)


def dephased_density_analytic(L: float, gamma: float, t: float) -> DensityFunction:
    """Ensemble-averaged density: oscillation term damped by exp(-gamma^2/2)"""
    _check_inputs(L, t)
    if math.isnan(gamma) or gamma < 0:
        raise DomainError(f"Phase width must be >= 0, got gamma={gamma}")
    log_prefactor = free_log_prefactor(L, t)
    damping = math.exp(-0.5 * gamma * gamma)

    def density(x):
        return fringe_density(x, t, L, log_prefactor, damping)

    return density


# The cross term of |e^{i phi} g_L + g_R|^2 is 2 Re[e^{i phi} g_L g_R^*] with
# g_L g_R^* = exp(-(x^2+L^2)/(1+t^2)) exp(+i 2txL/(1+t^2)), so the phase adds
# directly to the fringe argument: cos(2txL/(1+t^2) + phi). The norm of the
# t = 0 pair fixes A'^2 = 1/(2 sqrt(pi) (1 + cos(phi) e^{-L^2})).
def single_trial_density(L: float, phi: float, t: float) -> DensityFunction:
    """Density of one trial whose left packet carries the relative phase phi"""
    _check_inputs(L, t)
    if not math.isfinite(phi):
        raise DomainError(f"Phase must be finite, got phi={phi}")
    log_prefactor = free_log_prefactor(L, t, math.cos(phi))

    def density(x):
        return fringe_density(x, t, L, log_prefactor, 1.0, phi)

    return density


def _trial_basis(x: np.ndarray, t: float, L: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Phase-independent parts of a trial density: envelope, oscillation amplitude, fringe argument"""
    s2 = 1.0 + t * t
    envelope = 0.5 * (np.exp(-(x - L) ** 2 / s2) + np.exp(-(x + L) ** 2 / s2))
    amplitude = np.exp((-x * x - L * L) / s2)
    return envelope, amplitude, 2.0 * t * x * L / s2


def _trial_block(basis: Tuple[np.ndarray, np.ndarray, np.ndarray], t: float, L: float,
                 phis: np.ndarray) -> np.ndarray:
    """Single-trial densities, one row per phase"""
    envelope, amplitude, argument = basis
    norm_sq = 1.0 / (2.0 * math.sqrt(math.pi) * (1.0 + np.cos(phis) * math.exp(-L * L)))
    prefactors = 2.0 * norm_sq / math.sqrt(1.0 + t * t)
    return prefactors[:, np.newaxis] * (
        envelope[np.newaxis, :] + amplitude[np.newaxis, :] * np.cos(argument[np.newaxis, :] + phis[:, np.newaxis])
    )


@dataclass(frozen=True, eq=False)
class MonteCarloDensity:
    """Sample mean of single-trial densities with per-point standard error"""
    density: SampledFunction
    stderr: np.ndarray
    ensemble: PhaseEnsemble


def dephased_density_monte_carlo(L: float, ens: PhaseEnsemble, t: float,
                                 grid: Optional[Tuple[float, float, int]] = None,
                                 chunk_size: int = DEFAULT_CHUNK) -> MonteCarloDensity:
    """Average single_trial_density over ens.samples seeded Gaussian phases"""
    _check_inputs(L, t)
    x_min, x_max, n = grid if grid is not None else default_grid(L, t)
    x = np.linspace(x_min, x_max, n)

    if ens.gamma == 0:
        # degenerate distribution: every trial is the undephased density
        values = dephased_density_analytic(L, 0.0, t)(x)
        return MonteCarloDensity(SampledFunction(x_min, x_max, values), np.zeros(n), ens)

    phis = ens.draw_phases()
    basis = _trial_basis(x, t, L)
    mean = np.zeros(n)
    m2 = np.zeros(n)
    count = 0
    # chunks are merged in a fixed order so a seed reproduces the output bit for bit
    for start in range(0, ens.samples, chunk_size):
        block = _trial_block(basis, t, L, phis[start:start + chunk_size])
        k = block.shape[0]
        block_mean = block.mean(axis=0)
        block_m2 = ((block - block_mean) ** 2).sum(axis=0)
        delta = block_mean - mean
        total = count + k
        mean = mean + delta * (k / total)
        m2 = m2 + block_m2 + delta * delta * (count * k / total)
        count = total

    if count > 1:
        stderr = np.sqrt(m2 / (count - 1) / count)
    else:
        stderr = np.zeros(n)
    logging.info(f"Monte Carlo dephasing: {count} trials, gamma={ens.gamma}, seed={ens.seed}")
    return MonteCarloDensity(SampledFunction(x_min, x_max, mean), stderr, ens)


def sample_screen_hits(density: SampledFunction, count: int, seed: int = 0) -> np.ndarray:
    """Draw detection positions from a grid density by inverse CDF"""
    if count < 0:
        raise DomainError(f"Hit count must be >= 0, got {count}")
    values = np.clip(np.real(density.values), 0.0, None)
    cdf = cumulative_trapezoid(values, dx=density.dx, initial=0.0)
    if cdf[-1] <= 0:
        raise DomainError("Density has no mass on its grid")
    cdf = cdf / cdf[-1]
    rng = np.random.Generator(np.random.PCG64(seed))
    return np.interp(rng.random(count), cdf, density.x)
