"""
Entropy and mutual information of the system-apparatus(-observer) chain.

After the measurement the joint system-apparatus state is pure, so
I(S:A) = 2 H(rho_A) = 2 H(rho_S). A perfect observer reading the apparatus
gets only I(S:O) = H(rho_S), at most one bit.
"""
import logging
import math
from dataclasses import asdict, dataclass
from typing import Iterable, List, Optional

import numpy as np

from utils.errors import DomainError
from .measurement import (
    ConditionalPair,
    MeasurementModel,
    apparatus_state_approx,
    apparatus_state_exact,
    visibility,
)
from .numeric_oracle import DEFAULT_QUAD_TOL, hermitian_2x2_eigenvalues
from .states import QubitState, Spectrum
from .wavepacket import initial_wavefunction

EIGENVALUE_FLOOR = 1e-300
ENTROPY_DROP = 1e-15
MODES = ('exact', 'approx')


def von_neumann_entropy(spec: Spectrum) -> float:
    """-sum lambda log2 lambda in bits, with 0 log 0 = 0"""
    total = 0.0
    for value in spec.eigenvalues:
        lam = min(max(value, EIGENVALUE_FLOOR), 1.0)
        contribution = -lam * math.log2(lam)
        if contribution >= ENTROPY_DROP:
            total += contribution
    return total


def binary_entropy(x: float) -> float:
    """Shannon entropy of a two-outcome event with probabilities x and 1 - x"""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"Binary entropy needs x in [0, 1], got {x}")
    return von_neumann_entropy(Spectrum((x, 1.0 - x)))


def apparatus_state(model: MeasurementModel, mode: str = 'approx', tol: float = DEFAULT_QUAD_TOL) -> QubitState:
    """rho_A by quadrature ('exact') or from the beta closed form ('approx')"""
    if mode == 'exact':
        return apparatus_state_exact(initial_wavefunction(model.L), model, tol=tol)
    if mode == 'approx':
        return apparatus_state_approx(model)
    raise DomainError(f"Unknown mode '{mode}', expected one of {MODES}")


def apparatus_spectrum(model: MeasurementModel, mode: str = 'approx', tol: float = DEFAULT_QUAD_TOL) -> Spectrum:
    return hermitian_2x2_eigenvalues(apparatus_state(model, mode, tol))


def system_spectrum(pair: ConditionalPair) -> Spectrum:
    """Nonzero spectrum of rho_S = (|Psi^L><Psi^L| + |Psi^R><Psi^R|)/2"""
    return Spectrum.of_pair(abs(pair.overlap()))


def mutual_info_sa(model: MeasurementModel, mode: str = 'approx', tol: float = DEFAULT_QUAD_TOL) -> float:
    """I(S:A) = 2 H(rho_A) in bits"""
    return 2.0 * von_neumann_entropy(apparatus_spectrum(model, mode, tol))


def mutual_info_so(model: MeasurementModel, mode: str = 'approx', tol: float = DEFAULT_QUAD_TOL) -> float:
    """I(S:O) = H(rho_S) for an observer that reads the apparatus perfectly"""
    return ObserverChain(apparatus_spectrum(model, mode, tol)).mutual_info_system_observer


class ObserverChain:
    """Entropy bookkeeping for system -> apparatus -> perfect observer"""
    def __init__(self, spectrum: Spectrum):
        self.spectrum = spectrum

    @property
    def entropy_system(self) -> float:
        # Schmidt: rho_S and rho_A share their nonzero spectrum
        return von_neumann_entropy(self.spectrum)

    @property
    def entropy_apparatus(self) -> float:
        return self.entropy_system

    @property
    def entropy_observer(self) -> float:
        # the record is L or R with probability 1/2 each
        return 1.0

    @property
    def entropy_system_observer(self) -> float:
        # branches |Psi^L, L> and |Psi^R, R> are orthogonal through the record
        return 1.0

    @property
    def mutual_info_system_apparatus(self) -> float:
        """Before the observer acts: pure S-A state, two bits at most"""
        return 2.0 * self.entropy_system

    @property
    def mutual_info_system_observer(self) -> float:
        return self.entropy_system + self.entropy_observer - self.entropy_system_observer


def sigma_star(L: float) -> float:
    """Precision scale 3L/10 where the apparatus starts to lose the paths"""
    if not L > 0:
        raise DomainError(f"Half slit separation must be positive, got L={L}")
    return 0.3 * L


def default_sigma_grid(L: float, points: int = 200, sigma_min: float = 0.01,
                       max_factor: float = 10.0, include_limits: bool = True) -> List[float]:
    """Log-spaced sigma values in [sigma_min, max_factor * L], optionally with 0 and inf"""
    grid = list(np.logspace(math.log10(sigma_min), math.log10(max_factor * L), points))
    if include_limits:
        grid = [0.0] + grid + [math.inf]
    return grid


@dataclass(frozen=True)
class CurveRow:
    sigma: float
    info_exact: float
    info_approx: float
    visibility: float


def info_visibility_curve(L: float, sigma_grid: Iterable[float], tol: float = DEFAULT_QUAD_TOL) -> List[CurveRow]:
    """I(S:A) by quadrature and closed form plus asymptotic visibility for each sigma"""
    sigmas = [float(s) for s in sigma_grid]
    if any(s < 0 for s in sigmas) or sigmas != sorted(sigmas):
        raise DomainError("Sigma grid must be sorted and non-negative")
    rows = []
    for sigma in sigmas:
        model = MeasurementModel(sigma, L)
        rows.append(CurveRow(
            sigma=sigma,
            info_exact=mutual_info_sa(model, 'exact', tol),
            info_approx=mutual_info_sa(model, 'approx'),
            visibility=visibility(model),
        ))
    logging.info(f"Computed information/visibility curve for L={L} over {len(rows)} sigma values")
    return rows


@dataclass(frozen=True)
class InfoReport:
    entropy_s: float
    entropy_a: float
    mutual_info_sa: float
    mutual_info_so: float
    visibility: float
    sigma: float
    L: float

    def to_dict(self) -> dict:
        return asdict(self)


def info_report(model: MeasurementModel, mode: str = 'approx', tol: float = DEFAULT_QUAD_TOL,
                t: Optional[float] = None) -> InfoReport:
    chain = ObserverChain(apparatus_spectrum(model, mode, tol))
    return InfoReport(
        entropy_s=chain.entropy_system,
        entropy_a=chain.entropy_apparatus,
        mutual_info_sa=chain.mutual_info_system_apparatus,
        mutual_info_so=chain.mutual_info_system_observer,
        visibility=visibility(model, t),
        sigma=model.sigma,
        L=model.L,
    )
