"""Small state containers shared by the measurement, information and oracle modules."""
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from utils.errors import DomainError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
SPECTRUM_ENTRY_TOL = 1e-12
SPECTRUM_SUM_TOL = 1e-10


@dataclass(frozen=True)
class QubitState:
    """2x2 density matrix over the ordered apparatus basis {|L>, |R>}"""
    rho_ll: complex
    rho_lr: complex
    rho_rl: complex
    rho_rr: complex
    error_estimate: float = 0.0

    def __post_init__(self):
        if abs(self.rho_rl - np.conj(self.rho_lr)) > HERMITIAN_TOL:
            raise DomainError(f"Matrix is not Hermitian: rho_LR={self.rho_lr}, rho_RL={self.rho_rl}")
        if abs(self.rho_ll.imag) > HERMITIAN_TOL or abs(self.rho_rr.imag) > HERMITIAN_TOL:
            raise DomainError("Diagonal entries of a density matrix must be real")
        if abs(self.trace - 1.0) > TRACE_TOL:
            raise DomainError(f"Density matrix trace is {self.trace}, expected 1")

    @classmethod
    def from_matrix(cls, matrix, error_estimate: float = 0.0) -> "QubitState":
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (2, 2):
            raise DomainError(f"Expected a 2x2 matrix, got shape {m.shape}")
        return cls(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]), error_estimate)

    @property
    def trace(self) -> float:
        return float((self.rho_ll + self.rho_rr).real)

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.rho_ll, self.rho_lr], [self.rho_rl, self.rho_rr]], dtype=complex)

    def to_dict(self) -> dict:
        """Convert entries to plain floats for reports"""
        return {
            'rho_LL': self.rho_ll.real,
            'rho_LR_re': self.rho_lr.real,
            'rho_LR_im': self.rho_lr.imag,
            'rho_RR': self.rho_rr.real,
            'error_estimate': self.error_estimate,
        }


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of a density matrix, sorted descending"""
    eigenvalues: Tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        values = tuple(sorted((float(v) for v in self.eigenvalues), reverse=True))
        object.__setattr__(self, 'eigenvalues', values)
        if not values:
            raise DomainError("Spectrum needs at least one eigenvalue")
        for v in values:
            if v < -SPECTRUM_ENTRY_TOL or v > 1.0 + SPECTRUM_ENTRY_TOL:
                raise DomainError(f"Eigenvalue {v} outside [0, 1]")
        total = sum(values)
        if abs(total - 1.0) > SPECTRUM_SUM_TOL:
            raise DomainError(f"Spectrum sums to {total}, expected 1")

    @classmethod
    def of_pair(cls, overlap: float) -> "Spectrum":
        """Nonzero spectrum (1 +- s)/2 of an equal mixture of two pure states with overlap s"""
        s = min(abs(overlap), 1.0)
        return cls((0.5 * (1.0 + s), 0.5 * (1.0 - s)))

    def as_list(self) -> List[float]:
        return list(self.eigenvalues)
