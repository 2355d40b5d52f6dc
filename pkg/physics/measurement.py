"""
Tunable-precision which-path measurement.

The apparatus qubit records L or R through the measurement functions
m_L(x) = m_sigma(-x) and m_R(x) = m_sigma(x) with
m_sigma(x) = [Erfc(-x / (sigma sqrt 2)) / 2]^(1/2), so m_L^2 + m_R^2 = 1.
sigma = 0 is a perfect left/right projector and sigma = inf is no measurement;
both have explicit code paths instead of numeric limits.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import simpson, trapezoid
from scipy.special import erfc

from utils.errors import ApproximationDomainError, DomainError
from .numeric_oracle import DEFAULT_QUAD_LIMIT, DEFAULT_QUAD_TOL, adaptive_integrate
from .states import QubitState
from .wavepacket import (
    DensityFunction,
    GaussianTerm,
    SampledFunction,
    evaluate_terms,
    first_minimum,
    free_evolve,
    fringe_density,
    terms_inner_product,
    terms_norm,
)

SQRT2 = math.sqrt(2.0)
INV_SQRT2 = 1.0 / SQRT2
MIN_APPROX_L = 3.0
WARN_APPROX_L = 5.0
NORMALIZATION_TOL = 1e-6
QUAD_PADDING = 10.0  # density widths integrated beyond the outermost packet
T_MIN_TOL = 1e-6

Wavefunction = Union[SampledFunction, Sequence[GaussianTerm]]


def _check_sigma(sigma: float):
    if math.isnan(sigma) or sigma < 0:
        raise DomainError(f"Measurement precision must be >= 0, got sigma={sigma}")


def _like_input(result: np.ndarray, x):
    return float(result) if np.ndim(x) == 0 else result


def m_sigma(x, sigma: float):
    """Measurement function m_sigma(x) = sqrt(Erfc(-x/(sigma sqrt 2)) / 2)"""
    _check_sigma(sigma)
    x_arr = np.asarray(x, dtype=float)
    if sigma == 0:
        result = np.where(x_arr > 0, 1.0, np.where(x_arr < 0, 0.0, INV_SQRT2))
    elif math.isinf(sigma):
        result = np.full(x_arr.shape, INV_SQRT2)
    else:
        weight = 0.5 * erfc(-x_arr / (sigma * SQRT2))
        result = np.sqrt(np.clip(weight, 0.0, 1.0))
    return _like_input(result, x)


def coarse_grained_projectors(x, sigma: float) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues of F^L and F^R at x: Erfc(+-x/(sigma sqrt 2)) / 2"""
    _check_sigma(sigma)
    x_arr = np.asarray(x, dtype=float)
    if sigma == 0:
        right = np.where(x_arr > 0, 1.0, np.where(x_arr < 0, 0.0, 0.5))
        left = 1.0 - right
    elif math.isinf(sigma):
        left = np.full(x_arr.shape, 0.5)
        right = np.full(x_arr.shape, 0.5)
    else:
        left = 0.5 * erfc(x_arr / (sigma * SQRT2))
        right = 0.5 * erfc(-x_arr / (sigma * SQRT2))
    return _like_input(left, x), _like_input(right, x)


def smooth_projector_kernel(x_prime, x, sigma: float):
    """Gaussian smoothing of the position projector |x'><x'| evaluated at x"""
    if not sigma > 0 or math.isinf(sigma):
        raise DomainError(f"Smooth projector needs a finite positive sigma, got {sigma}")
    diff = np.asarray(x, dtype=float) - np.asarray(x_prime, dtype=float)
    result = np.exp(-diff * diff / (2.0 * sigma * sigma)) / (sigma * math.sqrt(2.0 * math.pi))
    return _like_input(result, diff)


def beta(sigma: float, L: float) -> float:
    """beta_sigma = 2 m_sigma(-L) m_sigma(L); 0 for a perfect measurement, 1 for none"""
    _check_sigma(sigma)
    if not math.isfinite(L) or L <= 0:
        raise DomainError(f"Half slit separation must be finite and positive, got L={L}")
    if sigma == 0:
        return 0.0
    if math.isinf(sigma):
        return 1.0
    return 2.0 * m_sigma(-L, sigma) * m_sigma(L, sigma)


def m_sigma_slope(L: float, sigma: float) -> float:
    """First-order Taylor coefficient of m_sigma about x = L"""
    if not sigma > 0 or math.isinf(sigma):
        return 0.0
    return math.exp(-L * L / (2.0 * sigma * sigma)) / (sigma * math.sqrt(8.0 * math.pi) * m_sigma(L, sigma))


def slope_bound(L: float) -> float:
    """sigma-independent bound 1/(2L sqrt(pi e)) on m_sigma_slope; always below 1/(5L)"""
    return 1.0 / (2.0 * L * math.sqrt(math.pi * math.e))


@dataclass(frozen=True)
class MeasurementModel:
    """Two-outcome Erfc measurement with precision sigma on slits at +-L"""
    sigma: float
    L: float

    def __post_init__(self):
        _check_sigma(self.sigma)
        if not math.isfinite(self.L) or self.L <= 0:
            raise DomainError(f"Half slit separation must be finite and positive, got L={self.L}")

    @classmethod
    def from_params(cls, params) -> "MeasurementModel":
        return cls(params.sigma, params.L)

    def m_left(self, x):
        return m_sigma(-np.asarray(x, dtype=float), self.sigma)

    def m_right(self, x):
        return m_sigma(x, self.sigma)

    @property
    def beta(self) -> float:
        return beta(self.sigma, self.L)

    def require_large_separation(self):
        if self.L < MIN_APPROX_L:
            raise ApproximationDomainError(
                f"Large-L closed forms need L >= {MIN_APPROX_L}, got L={self.L}"
            )
        if self.L < WARN_APPROX_L:
            logging.warning(f"L={self.L} is below {WARN_APPROX_L}; large-L approximations degrade")


@dataclass(frozen=True, eq=False)
class ConditionalPair:
    """Normalized post-measurement system states for outcomes L and R"""
    psi_left: Wavefunction
    psi_right: Wavefunction
    weight_left: float = 0.5
    weight_right: float = 0.5

    @property
    def is_sampled(self) -> bool:
        return isinstance(self.psi_left, SampledFunction)

    def overlap(self) -> complex:
        """<Psi^L|Psi^R>"""
        if self.is_sampled:
            return self.psi_left.inner_product(self.psi_right)
        return terms_inner_product(self.psi_left, self.psi_right)

    def mixture_density(self, x=None) -> np.ndarray:
        """Weighted density w_L|Psi^L|^2 + w_R|Psi^R|^2 (grid states ignore x)"""
        if self.is_sampled:
            left, right = self.psi_left.values, self.psi_right.values
        else:
            left = evaluate_terms(self.psi_left, x)
            right = evaluate_terms(self.psi_right, x)
        return self.weight_left * np.abs(left) ** 2 + self.weight_right * np.abs(right) ** 2


def _require_normalized_grid(psi0: SampledFunction):
    norm = psi0.norm()
    if abs(norm - 1.0) > NORMALIZATION_TOL:
        raise DomainError(f"Input wavefunction has grid norm {norm:.12f}, expected 1")


def _require_normalized_terms(terms: Sequence[GaussianTerm]):
    norm = terms_norm(terms)
    if abs(norm - 1.0) > NORMALIZATION_TOL:
        raise DomainError(f"Input wavefunction has norm {norm:.12f}, expected 1")


def conditional_states_exact(psi0: SampledFunction, model: MeasurementModel) -> ConditionalPair:
    """Psi^{L/R} = sqrt(2) m^{L/R} Psi on the grid, each renormalized"""
    _require_normalized_grid(psi0)
    x = psi0.x
    left = psi0.with_values(SQRT2 * model.m_left(x) * psi0.values).normalized()
    right = psi0.with_values(SQRT2 * model.m_right(x) * psi0.values).normalized()
    return ConditionalPair(left, right)


def conditional_states_approx(model: MeasurementModel) -> ConditionalPair:
    """Large-L conditional states with m_sigma frozen at the packet centres"""
    model.require_large_separation()
    L = model.L
    near = m_sigma(L, model.sigma)   # weight of the packet on the recorded side
    far = m_sigma(-L, model.sigma)
    b = (math.sqrt(math.pi) * (1.0 + model.beta * math.exp(-L * L))) ** -0.5
    psi_left = [GaussianTerm(complex(b * near), -L), GaussianTerm(complex(b * far), L)]
    psi_right = [GaussianTerm(complex(b * far), -L), GaussianTerm(complex(b * near), L)]
    return ConditionalPair(psi_left, psi_right)


def _integration_window(terms: Sequence[GaussianTerm]) -> Tuple[float, float]:
    spread = max(abs(complex(t.width)) / math.sqrt(complex(t.width).real) for t in terms)
    centers = [t.center for t in terms]
    return min(centers) - QUAD_PADDING * spread, max(centers) + QUAD_PADDING * spread


def _apparatus_entries_quadrature(terms, model, tol, limit):
    _require_normalized_terms(terms)
    a, b = _integration_window(terms)
    breaks = sorted({0.0, *(t.center for t in terms)})

    # scalar evaluation; quad calls the integrand one point at a time
    packets = [(complex(t.coeff), t.center, 2.0 * complex(t.width)) for t in terms]

    def density(x):
        amplitude = sum(c * cmath.exp(-(x - mu) ** 2 / w2) for c, mu, w2 in packets)
        return abs(amplitude) ** 2

    def weighted(side):
        def integrand(x):
            f_left, f_right = coarse_grained_projectors(x, model.sigma)
            return (f_left if side == 'L' else f_right) * density(x)
        return adaptive_integrate(integrand, a, b, tol=tol, limit=limit, points=breaks)

    def coherence(x):
        return model.m_left(x) * model.m_right(x) * density(x)

    d_left, err_left = weighted('L')
    d_right, err_right = weighted('R')
    if model.sigma == 0:
        off, err_off = 0.0, 0.0
    else:
        off, err_off = adaptive_integrate(coherence, a, b, tol=tol, limit=limit, points=breaks)
    return d_left, d_right, off, err_left + err_right + err_off


def _apparatus_entries_grid(psi0: SampledFunction, model):
    _require_normalized_grid(psi0)
    x = psi0.x
    rho = np.abs(psi0.values) ** 2
    f_left, f_right = coarse_grained_projectors(x, model.sigma)
    coherence = np.zeros_like(rho) if model.sigma == 0 else model.m_left(x) * model.m_right(x) * rho
    entries, error = [], 0.0
    for integrand in (f_left * rho, f_right * rho, coherence):
        value = simpson(integrand, dx=psi0.dx)
        error += abs(value - trapezoid(integrand, dx=psi0.dx))
        entries.append(float(value))
    return entries[0], entries[1], entries[2], error


def apparatus_state_exact(psi0: Wavefunction, model: MeasurementModel,
                          tol: float = DEFAULT_QUAD_TOL, limit: int = DEFAULT_QUAD_LIMIT) -> QubitState:
    """Apparatus reduced state from the exact measurement functions"""
    if isinstance(psi0, SampledFunction):
        if tol != DEFAULT_QUAD_TOL:
            logging.debug(f"Grid input integrates with Simpson on its own points; tol={tol} is not used")
        d_left, d_right, off, error = _apparatus_entries_grid(psi0, model)
    else:
        d_left, d_right, off, error = _apparatus_entries_quadrature(list(psi0), model, tol, limit)
    # entries are rescaled by the integrated norm so the trace is exactly one
    trace = d_left + d_right
    logging.debug(f"Exact apparatus state for sigma={model.sigma}: trace before rescale {trace:.15f}")
    return QubitState(d_left / trace, off / trace, off / trace, d_right / trace, error_estimate=error)


def apparatus_state_approx(model: MeasurementModel) -> QubitState:
    """Closed-form apparatus state from the large-L conditional states"""
    model.require_large_separation()
    e = math.exp(-model.L * model.L)
    b = model.beta
    off = (b + e) / (2.0 * (1.0 + b * e))
    return QubitState(0.5, off, off, 0.5)


def measured_log_prefactor(model: MeasurementModel, t: float) -> float:
    """log of exp-free part of Gamma_sigma: 1/(sqrt(pi(1+t^2)) (1 + beta e^{-L^2}))"""
    return -0.5 * math.log(math.pi * (1.0 + t * t)) - math.log1p(model.beta * math.exp(-model.L * model.L))


def measured_density(model: MeasurementModel, t: float) -> DensityFunction:
    """Detection density after the measurement, P_sigma(x, t)"""
    model.require_large_separation()
    if not math.isfinite(t) or t < 0:
        raise DomainError(f"Time must be finite and non-negative, got t={t}")
    log_prefactor = measured_log_prefactor(model, t)
    contrast = model.beta
    L = model.L

    def density(x):
        return fringe_density(x, t, L, log_prefactor, contrast)

    return density


def incoherent_density(L: float, t: float) -> DensityFunction:
    """P_0: the perfect-measurement density, an incoherent sum of the two spreading packets"""
    return measured_density(MeasurementModel(0.0, L), t)


def evolved_conditional_wavefunctions(model: MeasurementModel, t: float) -> Tuple[List[GaussianTerm], List[GaussianTerm]]:
    """Approximate conditional states evolved freely to time t"""
    pair = conditional_states_approx(model)
    return free_evolve(pair.psi_left, t), free_evolve(pair.psi_right, t)


def central_curvature_sign(model: MeasurementModel, t: float) -> float:
    """Positive multiple of d^2 P_sigma / dx^2 at x = 0; negative when x = 0 is a local maximum"""
    b = model.beta
    return 2.0 * model.L ** 2 * (1.0 - b * t * t) / (1.0 + t * t) - (1.0 + b)


def visibility_t_min(model: MeasurementModel, tol: float = T_MIN_TOL) -> float:
    """Earliest time at which P_sigma has a local maximum at x = 0, by bisection"""
    if central_curvature_sign(model, 0.0) < 0:
        return 0.0
    lo, hi = 0.0, 1.0
    while central_curvature_sign(model, hi) >= 0:
        lo, hi = hi, 2.0 * hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if central_curvature_sign(model, mid) < 0:
            hi = mid
        else:
            lo = mid
    return hi


def asymptotic_visibility(beta_value: float, L: float) -> float:
    """t -> inf visibility [(1+b) - q(1-b)] / [(1+b) + q(1-b)], q = exp(-pi^2 / 4L^2)"""
    q = math.exp(-math.pi ** 2 / (4.0 * L * L))
    return ((1.0 + beta_value) - q * (1.0 - beta_value)) / ((1.0 + beta_value) + q * (1.0 - beta_value))


def visibility(model: MeasurementModel, t: Optional[Union[float, str]] = None, tol: float = T_MIN_TOL) -> float:
    """Fringe visibility from P(0) and P(x*); t=None or 'asymptotic' gives the late-time limit"""
    if t is None or t == 'asymptotic':
        return asymptotic_visibility(model.beta, model.L)
    t = float(t)
    t_min = visibility_t_min(model, tol)
    if t < t_min:
        raise DomainError(
            f"No central maximum at t={t}; the density first peaks at x=0 for t >= {t_min:.6f}"
        )
    if t == 0:
        raise DomainError("Visibility is undefined at t=0 (no fringes yet)")
    density = measured_density(model, t)
    p_center = float(density(0.0))
    p_min = float(density(first_minimum(model.L, t)))
    return (p_center - p_min) / (p_center + p_min)
