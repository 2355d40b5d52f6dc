"""
Slit Decoherence Physics
------------------------
Numerical library for the double-slit particle with a tunable which-path measurement.

Main components:
- wavepacket: analytic double-Gaussian state, free evolution and the unmeasured density
- measurement: Erfc measurement functions, conditional states, apparatus state, visibility
- info_metrics: entropies and mutual information of the system-apparatus-observer chain
- dephasing: random relative phase, analytic average and seeded Monte Carlo
- numeric_oracle: spectral propagation and adaptive quadrature used as independent checks
"""
from .wavepacket import ModelParams, GaussianTerm, SampledFunction, free_density, free_evolve, initial_wavefunction
from .measurement import MeasurementModel, beta, m_sigma, measured_density, visibility
from .info_metrics import info_visibility_curve, mutual_info_sa, von_neumann_entropy
from .dephasing import PhaseEnsemble, dephased_density_analytic, dephased_density_monte_carlo

__all__ = [
    'ModelParams', 'GaussianTerm', 'SampledFunction', 'free_density', 'free_evolve', 'initial_wavefunction',
    'MeasurementModel', 'beta', 'm_sigma', 'measured_density', 'visibility',
    'info_visibility_curve', 'mutual_info_sa', 'von_neumann_entropy',
    'PhaseEnsemble', 'dephased_density_analytic', 'dephased_density_monte_carlo',
]

__version__ = '0.1.0'
__description__ = 'Which-path measurement, decoherence and dephasing in the double slit'
