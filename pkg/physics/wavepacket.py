"""
Double-slit wavepacket: analytic superposition of two Gaussians and its free evolution.

Everything works in dimensionless units: positions in slit widths, time in
units of m*Delta^2/hbar. Wavefunctions are sums of GaussianTerm objects so the
free evolution stays exact; SampledFunction is the grid form used for output
and for the brute-force checks.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy.integrate import simpson

from utils.errors import DomainError, UnsupportedInputError

DEFAULT_GRID_POINTS = 4096
GRID_HALF_WIDTHS = 8.0  # packet widths kept on each side of the slits
WIDTH_TOL = 1e-15

DensityFunction = Callable[[np.ndarray], np.ndarray]


def _check_separation(L: float):
    if not math.isfinite(L) or L <= 0:
        raise DomainError(f"Half slit separation must be finite and positive, got L={L}")


def _check_time(t: float):
    if not math.isfinite(t) or t < 0:
        raise DomainError(f"Time must be finite and non-negative, got t={t}")


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless model parameters; sigma=math.inf means no measurement"""
    L: float = 5.0
    sigma: float = math.inf
    t: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        _check_separation(self.L)
        if math.isnan(self.sigma) or self.sigma < 0:
            raise DomainError(f"Measurement precision must be >= 0, got sigma={self.sigma}")
        _check_time(self.t)
        if not math.isfinite(self.gamma) or self.gamma < 0:
            raise DomainError(f"Dephasing width must be finite and >= 0, got gamma={self.gamma}")

    def to_dict(self) -> dict:
        return {'L': self.L, 'sigma': self.sigma, 't': self.t, 'gamma': self.gamma}


@dataclass(frozen=True)
class GaussianTerm:
    """One term coeff * exp(-(x - center)^2 / (2 width)) with complex width"""
    coeff: complex
    center: float
    width: complex = 1.0 + 0.0j

    def __post_init__(self):
        if complex(self.width).real <= 0:
            raise DomainError(f"Gaussian width must have positive real part, got {self.width}")

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.coeff * np.exp(-(x - self.center) ** 2 / (2.0 * self.width))


def evaluate_terms(terms: Sequence[GaussianTerm], x) -> np.ndarray:
    """Evaluate a sum of Gaussian terms on x"""
    x = np.asarray(x, dtype=float)
    total = np.zeros(x.shape, dtype=complex)
    for term in terms:
        total = total + term(x)
    return total


def gaussian_overlap(f: GaussianTerm, g: GaussianTerm) -> complex:
    """Closed-form <f|g> over the real line"""
    a = 1.0 / (2.0 * np.conj(complex(f.width)))
    b = 1.0 / (2.0 * complex(g.width))
    s = a + b
    shift = f.center - g.center
    return np.conj(f.coeff) * g.coeff * cmath.sqrt(math.pi / s) * cmath.exp(-a * b / s * shift ** 2)


def terms_inner_product(left: Sequence[GaussianTerm], right: Sequence[GaussianTerm]) -> complex:
    return sum((gaussian_overlap(f, g) for f in left for g in right), 0.0j)


def terms_norm(terms: Sequence[GaussianTerm]) -> float:
    """L2 norm of a Gaussian sum"""
    return math.sqrt(max(terms_inner_product(terms, terms).real, 0.0))


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Complex or real samples on a uniform grid including both end points"""
    x_min: float
    x_max: float
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        object.__setattr__(self, 'values', values)
        if values.ndim != 1 or values.size < 2:
            raise DomainError(f"Need at least 2 samples, got shape {values.shape}")
        if not self.x_max > self.x_min:
            raise DomainError(f"Empty grid [{self.x_min}, {self.x_max}]")

    @classmethod
    def from_callable(cls, func: Callable, x_min: float, x_max: float, n: int) -> "SampledFunction":
        x = np.linspace(x_min, x_max, n)
        return cls(x_min, x_max, np.asarray(func(x)))

    @classmethod
    def from_terms(cls, terms: Sequence[GaussianTerm], x_min: float, x_max: float, n: int) -> "SampledFunction":
        return cls.from_callable(lambda x: evaluate_terms(terms, x), x_min, x_max, n)

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)

    def with_values(self, values) -> "SampledFunction":
        return SampledFunction(self.x_min, self.x_max, np.asarray(values))

    def integrate(self) -> complex:
        """Composite Simpson integral of the samples"""
        result = simpson(self.values, dx=self.dx)
        return complex(result) if np.iscomplexobj(self.values) else float(result)

    def density(self) -> "SampledFunction":
        return self.with_values(np.abs(self.values) ** 2)

    def norm(self) -> float:
        return math.sqrt(max(self.density().integrate(), 0.0))

    def inner_product(self, other: "SampledFunction") -> complex:
        """<self|other> on the shared grid"""
        if other.n != self.n or other.x_min != self.x_min or other.x_max != self.x_max:
            raise DomainError("Inner product needs both functions on the same grid")
        return complex(simpson(np.conj(self.values) * other.values, dx=self.dx))

    def normalized(self) -> "SampledFunction":
        norm = self.norm()
        if norm == 0.0:
            raise DomainError("Cannot normalize a function that vanishes on the grid")
        return self.with_values(self.values / norm)


def default_grid(L: float, t: float, n: int = DEFAULT_GRID_POINTS) -> Tuple[float, float, int]:
    """Symmetric grid covering GRID_HALF_WIDTHS spread widths beyond each slit"""
    _check_separation(L)
    _check_time(t)
    half = L + GRID_HALF_WIDTHS * math.sqrt(1.0 + t * t)
    return -half, half, n


def pair_norm_squared(L: float, cos_phase: float = 1.0) -> float:
    """A^2 for the pair A[e^{i phi} g(x+L) + g(x-L)]; cos_phase = cos(phi)"""
    return 1.0 / (2.0 * math.sqrt(math.pi) * (1.0 + cos_phase * math.exp(-L * L)))


def normalization_a(L: float) -> float:
    """Normalization A of the equal-weight double-slit superposition"""
    _check_separation(L)
    return math.sqrt(pair_norm_squared(L))


def initial_wavefunction(L: float) -> List[GaussianTerm]:
    """Two unit-width Gaussians at -L and +L with equal amplitude"""
    a = normalization_a(L)
    return [GaussianTerm(complex(a), -L), GaussianTerm(complex(a), L)]


def free_evolve(terms: Sequence[GaussianTerm], t: float) -> List[GaussianTerm]:
    """Exact free evolution of unit-width Gaussian terms to time t"""
    _check_time(t)
    evolved_width = complex(1.0, t)
    scale = 1.0 / cmath.sqrt(evolved_width)
    evolved = []
    for term in terms:
        if abs(complex(term.width) - 1.0) > WIDTH_TOL:
            raise UnsupportedInputError(
                f"free_evolve only propagates unit-width terms, got width {term.width}; "
                f"use numeric_oracle.spectral_propagate for general states"
            )
        evolved.append(GaussianTerm(term.coeff * scale, term.center, evolved_width))
    return evolved


def gamma_factor(x, t: float, L: float):
    """Envelope 2A^2 (1+t^2)^(-1/2) exp[(-x^2 - L^2)/(1+t^2)]"""
    _check_time(t)
    s2 = 1.0 + t * t
    x = np.asarray(x, dtype=float)
    return 2.0 * pair_norm_squared(L) / math.sqrt(s2) * np.exp((-x * x - L * L) / s2)


def fringe_density(x, t: float, L: float, log_prefactor, contrast=1.0, phase=0.0) -> np.ndarray:
    """
    Evaluate exp(log_prefactor) * exp(-(x^2+L^2)/s2) * [cosh(2xL/s2) + contrast*cos(2txL/s2 + phase)].

    The cosh product is folded into the exponent as 0.5*[exp(a+) + exp(a-)] so it
    never overflows; log_prefactor, contrast and phase broadcast against x.
    """
    s2 = 1.0 + t * t
    x = np.asarray(x, dtype=float)
    a_plus = log_prefactor - (x - L) ** 2 / s2
    a_minus = log_prefactor - (x + L) ** 2 / s2
    a_zero = log_prefactor + (-x * x - L * L) / s2
    envelope = 0.5 * (np.exp(a_plus) + np.exp(a_minus))
    return envelope + contrast * np.exp(a_zero) * np.cos(2.0 * t * x * L / s2 + phase)


def free_log_prefactor(L: float, t: float, cos_phase: float = 1.0) -> float:
    """log(2A^2 / sqrt(1+t^2))"""
    return math.log(2.0 * pair_norm_squared(L, cos_phase)) - 0.5 * math.log1p(t * t)


def free_density(L: float, t: float) -> DensityFunction:
    """Probability density of the unmeasured particle at time t"""
    _check_separation(L)
    _check_time(t)
    log_prefactor = free_log_prefactor(L, t)

    def density(x):
        return fringe_density(x, t, L, log_prefactor)

    logging.debug(f"Built free density for L={L}, t={t}")
    return density


def fringe_spacing(L: float, t: float) -> float:
    """Distance between neighbouring interference maxima, pi(1+t^2)/(tL)"""
    if t <= 0:
        raise DomainError("Fringes have no finite spacing at t=0")
    return math.pi * (1.0 + t * t) / (t * L)


def first_minimum(L: float, t: float) -> float:
    """x* = pi(1+t^2)/(2tL), first zero of the oscillation term's phase at pi"""
    return 0.5 * fringe_spacing(L, t)
