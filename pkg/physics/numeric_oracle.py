"""
Brute-force numerics used to check the closed forms.

spectral_propagate applies the free-particle kernel exp(-i p^2 t / 2) in one
multiply on the discrete Fourier grid, adaptive_integrate wraps QUADPACK, and
hermitian_2x2_eigenvalues is the closed-form 2x2 eigen-solver.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import fft
from scipy.integrate import quad

from utils.errors import DomainError, GridTooSmallError, QuadratureError
from .states import QubitState, Spectrum
from .wavepacket import SampledFunction

MIN_ORACLE_POINTS = 256
EDGE_AMPLITUDE_TOL = 1e-12
DEFAULT_QUAD_TOL = 1e-10
DEFAULT_QUAD_LIMIT = 200
ORACLE_X_MAX = 160.0
ORACLE_POINTS = 8192


@dataclass(frozen=True)
class GridSpec:
    """Uniform power-of-two grid used by the spectral oracle"""
    x_min: float = -ORACLE_X_MAX
    x_max: float = ORACLE_X_MAX
    n: int = ORACLE_POINTS

    def __post_init__(self):
        if self.n < MIN_ORACLE_POINTS or self.n & (self.n - 1):
            raise GridTooSmallError(f"Oracle grid needs a power-of-two n >= {MIN_ORACLE_POINTS}, got {self.n}")
        if not self.x_max > self.x_min:
            raise GridTooSmallError(f"Empty oracle grid [{self.x_min}, {self.x_max}]")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)

    def sample(self, func: Callable) -> SampledFunction:
        return SampledFunction.from_callable(func, self.x_min, self.x_max, self.n)

    def check_edges(self, psi: SampledFunction):
        """Raise if the wavefunction has not decayed at both grid edges"""
        edge = max(abs(psi.values[0]), abs(psi.values[-1]))
        if edge >= EDGE_AMPLITUDE_TOL:
            raise GridTooSmallError(
                f"Wavefunction amplitude {edge:.3e} at the grid edge exceeds {EDGE_AMPLITUDE_TOL:.0e}; "
                f"widen [{self.x_min}, {self.x_max}]"
            )

    @classmethod
    def of(cls, psi: SampledFunction) -> "GridSpec":
        return cls(psi.x_min, psi.x_max, psi.n)


def momentum_grid(n: int, dx: float) -> np.ndarray:
    """p_k = 2 pi k / (n dx) in FFT order, negative frequencies wrapped to the upper half"""
    return 2.0 * math.pi * fft.fftfreq(n, d=dx)


def spectral_propagate(psi: SampledFunction, t: float) -> SampledFunction:
    """Propagate a sampled wavefunction freely to time t with a single spectral multiply"""
    if not math.isfinite(t) or t < 0:
        raise DomainError(f"Time must be finite and non-negative, got t={t}")
    grid = GridSpec.of(psi)
    grid.check_edges(psi)
    if t == 0:
        return psi.with_values(np.array(psi.values, dtype=complex))

    p = momentum_grid(grid.n, grid.dx)
    kernel = np.exp(-0.5j * p * p * t)
    # forward transform unnormalized, 1/n applied on the inverse
    evolved = fft.ifft(fft.fft(np.asarray(psi.values, dtype=complex)) * kernel)
    logging.debug(f"Spectral propagation to t={t} on {grid.n} points")
    return psi.with_values(evolved)


def adaptive_integrate(f: Callable[[float], float], a: float, b: float,
                       tol: float = DEFAULT_QUAD_TOL,
                       limit: int = DEFAULT_QUAD_LIMIT,
                       points: Optional[Sequence[float]] = None) -> Tuple[float, float]:
    """Adaptive Gauss-Kronrod integral of f over [a, b]; returns (value, error estimate)"""
    if not tol > 0:
        raise DomainError(f"Quadrature tolerance must be positive, got {tol}")
    if points is not None:
        points = [p for p in points if a < p < b] or None
    result = quad(f, a, b, epsabs=tol, epsrel=0.0, limit=limit, points=points, full_output=1)
    value, error = float(result[0]), float(result[1])
    if len(result) > 3:
        # QUADPACK reports a nonzero ier only together with a message
        raise QuadratureError(
            f"Quadrature on [{a}, {b}] did not reach tol={tol}: {result[3]}",
            estimate=value, error_estimate=error,
        )
    return value, error


def hermitian_2x2_eigenvalues(m: QubitState) -> Spectrum:
    """Closed-form eigenvalues of a Hermitian 2x2 matrix from its trace and determinant"""
    a = m.rho_ll.real
    d = m.rho_rr.real
    off = abs(m.rho_lr)
    half_trace = 0.5 * (a + d)
    radius = math.hypot(0.5 * (a - d), off)
    return Spectrum((half_trace + radius, half_trace - radius))
