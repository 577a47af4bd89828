"""
Probability series, exponential decay fits, recurrence peaks and diagnostics.

All functions work on sampled data and never interpolate between samples.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import peak_prominences

from .errors import (
    EmptyWindowError,
    InsufficientSamplesError,
    NoDecayError,
    NonPositiveValueError,
    ValidationError,
)
from .model import BRIGHT, StateIndex, recurrence_time
from .ode import CONSERVATION_TOL, Trajectory, rhs_norm_preservation_check

__all__ = [
    "ProbabilitySeries",
    "DecayFit",
    "Peak",
    "PeakList",
    "DEFAULT_PROMINENCE",
    "DEFAULT_T_PROBE",
    "MIN_FIT_SAMPLES",
    "probability_series",
    "fit_exponential",
    "default_fit_window",
    "fit_decay",
    "detect_peaks",
    "recurrence_peak",
    "short_time_coefficient",
    "conservation_report",
]

DEFAULT_PROMINENCE = 0.01
DEFAULT_T_PROBE = 0.05
MIN_FIT_SAMPLES = 10
WINDOW_ENTRY_LEVEL = 0.95


@dataclass(frozen=True)
class ProbabilitySeries:
    times: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    label: StateIndex = BRIGHT

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ValidationError("times and values differ in length")


@dataclass(frozen=True)
class DecayFit:
    """Least-squares fit of ln p(t) = log_intercept - gamma t over ``window``."""

    gamma: float
    log_intercept: float
    window: tuple[float, float]
    rms_residual: float

    def predict(self, t):
        return np.exp(self.log_intercept - self.gamma * np.asarray(t, dtype=float))


@dataclass(frozen=True)
class Peak:
    time: float
    value: float
    prominence: float


@dataclass(frozen=True)
class PeakList:
    peaks: tuple[Peak, ...] = ()

    def __len__(self):
        return len(self.peaks)

    def __iter__(self):
        return iter(self.peaks)

    def __getitem__(self, i):
        return self.peaks[i]

    @property
    def times(self) -> np.ndarray:
        return np.array([p.time for p in self.peaks])

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.peaks])


def probability_series(traj: Trajectory, idx: StateIndex) -> ProbabilitySeries:
    pos = traj.params.position(idx)
    x = traj.states[:, pos]
    return ProbabilitySeries(traj.times, x.real ** 2 + x.imag ** 2, idx)


def fit_exponential(series: ProbabilitySeries, window) -> DecayFit:
    """Ordinary least squares of ln(values) against time over ``window`` (inclusive).

    Raises:
        EmptyWindowError: fewer than 10 samples fall in the window
        NonPositiveValueError: a value in the window is <= 0
        NoDecayError: the fitted slope is positive
    """
    t_lo, t_hi = float(window[0]), float(window[1])
    if not t_lo < t_hi:
        raise EmptyWindowError(f"window ({t_lo}, {t_hi}) is empty")
    sel = (series.times >= t_lo) & (series.times <= t_hi)
    if np.count_nonzero(sel) < MIN_FIT_SAMPLES:
        raise EmptyWindowError(
            f"window ({t_lo}, {t_hi}) holds {np.count_nonzero(sel)} samples, need {MIN_FIT_SAMPLES}"
        )
    t = series.times[sel]
    y = series.values[sel]
    if np.any(y <= 0):
        raise NonPositiveValueError("cannot take the log of non-positive probabilities")
    logy = np.log(y)
    tc = t - t.mean()
    slope = float(np.dot(tc, logy - logy.mean()) / np.dot(tc, tc))
    intercept = float(logy.mean() - slope * t.mean())
    if slope > 0:
        raise NoDecayError(f"fitted slope {slope:.3e} is positive")
    resid = logy - (intercept + slope * t)
    rms = float(np.sqrt(np.mean(resid ** 2)))
    return DecayFit(-slope, intercept, (t_lo, t_hi), rms)


def default_fit_window(series: ProbabilitySeries, recurrence_time: float | None = None) -> tuple[float, float]:
    """Automatic decay window for a bright-state survival series.

    The window ends at the first strict local minimum, at ``recurrence_time``
    (the ladder's revival time 2*pi/epsilon, past which the decay breaks), or
    at the last sample, whichever comes first. It starts at the first sample
    where 5% of the drop accumulated by the window end has occurred, which
    skips the quadratic shoulder near t = 0; for a series that decays to ~0
    this is the first sample with p <= 0.95.

    Raises:
        NoDecayError: the series never drops by more than the integrator's
            conservation band (2.5e-6)
        EmptyWindowError: the window would hold a single sample
    """
    v = np.asarray(series.values, dtype=float)
    t = np.asarray(series.times, dtype=float)
    i_end = len(v) - 1
    if recurrence_time is not None:
        i_end = min(i_end, int(np.searchsorted(t, recurrence_time, side="right")) - 1)
    inner = np.arange(1, i_end)
    minima = inner[(v[inner - 1] > v[inner]) & (v[inner] < v[inner + 1])]
    i_hi = int(minima[0]) if minima.size else i_end
    drop = 1.0 - float(np.min(v[: i_hi + 1]))
    if drop <= CONSERVATION_TOL:
        raise NoDecayError("series shows no resolvable decay")
    level = 1.0 - (1.0 - WINDOW_ENTRY_LEVEL) * drop
    i_lo = int(np.flatnonzero(v[: i_hi + 1] <= level)[0])
    if not i_lo < i_hi:
        raise EmptyWindowError("decay window collapses to a single sample")
    return float(t[i_lo]), float(t[i_hi])


def fit_decay(traj: Trajectory, window=None) -> DecayFit:
    """Fit the bright-state decay of a trajectory.

    Without an explicit ``window`` the default window is used, capped at the
    ladder's revival time 2*pi/epsilon.
    """
    series = probability_series(traj, BRIGHT)
    if window is None:
        window = default_fit_window(series, recurrence_time(traj.params))
    return fit_exponential(series, window)


def _strict_maxima(v):
    inner = np.arange(1, len(v) - 1)
    return inner[(v[inner - 1] < v[inner]) & (v[inner] > v[inner + 1])]


def detect_peaks(series: ProbabilitySeries, min_prominence: float = DEFAULT_PROMINENCE) -> PeakList:
    """Strict interior local maxima whose prominence is at least ``min_prominence``.

    Prominence is the height of the peak above the higher of the two minima
    that separate it from higher ground (or the series ends) on each side.
    """
    if not min_prominence >= 0:
        raise ValidationError(f"min_prominence must be >= 0, got {min_prominence!r}")
    v = np.asarray(series.values, dtype=float)
    if len(v) < 3:
        return PeakList()
    idx = _strict_maxima(v)
    if idx.size == 0:
        return PeakList()
    prom, _, _ = peak_prominences(v, idx)
    keep = prom >= min_prominence
    return PeakList(tuple(
        Peak(float(series.times[i]), float(v[i]), float(p)) for i, p in zip(idx[keep], prom[keep])
    ))


def recurrence_peak(peaks: PeakList) -> Peak | None:
    """The tallest detected peak, i.e. the main revival of the survival probability."""
    if not len(peaks):
        return None
    return max(peaks, key=lambda p: p.value)


def short_time_coefficient(series: ProbabilitySeries, t_probe: float = DEFAULT_T_PROBE) -> float:
    """Least-squares c in p(t) ~ 1 - c t**2 over samples with 0 < t <= t_probe."""
    if not t_probe > 0:
        raise ValidationError(f"t_probe must be > 0, got {t_probe!r}")
    sel = (series.times > 0) & (series.times <= t_probe)
    if np.count_nonzero(sel) < 3:
        raise InsufficientSamplesError(f"need at least 3 samples in (0, {t_probe}]")
    t2 = series.times[sel] ** 2
    drop = 1.0 - series.values[sel]
    return float(np.dot(t2, drop) / np.dot(t2, t2))


def conservation_report(traj: Trajectory) -> float:
    """Largest |p_tot - 1| over the trajectory's samples."""
    return rhs_norm_preservation_check(traj)
