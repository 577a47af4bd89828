"""Bright state coupled to a finite dark-level ladder: amplitude integration, exact spectral
propagation and survival-probability analysis."""

from .analysis import (
    DecayFit,
    Peak,
    PeakList,
    ProbabilitySeries,
    conservation_report,
    default_fit_window,
    detect_peaks,
    fit_decay,
    fit_exponential,
    probability_series,
    recurrence_peak,
    short_time_coefficient,
)
from .model import (
    BRIGHT,
    ArrowheadHamiltonian,
    ModelParams,
    StateIndex,
    build_hamiltonian,
    golden_rule_gamma,
    level_frequency,
    make_params,
    recurrence_time,
)
from .ode import Trajectory, derivative, initial_state, integrate, rhs_norm_preservation_check
from .spectral import ArrowheadSpectrum, propagate, propagate_full, secular_function, solve_spectrum

__version__ = "0.1.0"
