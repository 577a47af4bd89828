"""
Fixed-step Runge-Kutta integration of the coupled amplitude equations.

The amplitudes obey dx/dt = -i H x with H the arrowhead Hamiltonian, i.e.

    dx_j/dt = -i (w_j x_j + vbar x_s)              for a dark state j
    dx_s/dt = -i (w_s x_s + vbar sum_k x_k)        for the bright state

Amplitudes are never renormalized; total probability is tracked as a
diagnostic and a run is rejected when it leaves 1 +/- 2.5e-6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConservationError,
    DimensionMismatchError,
    NonFiniteStateError,
    ValidationError,
)
from .model import ArrowheadHamiltonian, ModelParams, build_hamiltonian

__all__ = [
    "DEFAULT_DT_MAX",
    "DEFAULT_SAMPLE_STRIDE",
    "CONSERVATION_TOL",
    "Trajectory",
    "initial_state",
    "derivative",
    "rk4_step",
    "step_matrix",
    "integrate",
    "rhs_norm_preservation_check",
]

DEFAULT_DT_MAX = 1e-3
DEFAULT_SAMPLE_STRIDE = 10
CONSERVATION_TOL = 2.5e-6


@dataclass(frozen=True)
class Trajectory:
    """Sampled amplitudes of one run.

    ``states[j]`` holds the amplitude vector (canonical ordering) at
    ``times[j]``. ``dt`` is the step actually taken, ``dt_max`` the bound
    that was requested.
    """

    params: ModelParams
    times: np.ndarray = field(repr=False)
    states: np.ndarray = field(repr=False)
    dt_max: float
    sample_stride: int
    dt: float

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise DimensionMismatchError("times and states differ in length")

    @property
    def probabilities(self) -> np.ndarray:
        """|x_i(t)|**2 with shape (samples, n)."""
        return self.states.real ** 2 + self.states.imag ** 2

    @property
    def total_probability(self) -> np.ndarray:
        return self.probabilities.sum(axis=1)


def initial_state(params: ModelParams) -> np.ndarray:
    x = np.zeros(params.n, dtype=complex)
    x[0] = 1.0
    return x


def derivative(params: ModelParams, state, hamiltonian: ArrowheadHamiltonian | None = None) -> np.ndarray:
    """Right-hand side -i H x of the amplitude equations.

    ``state`` may be a vector of length n or an (n, ncols) block of vectors.
    """
    x = np.asarray(state, dtype=complex)
    if x.shape[0] != params.n:
        raise DimensionMismatchError(f"state has length {x.shape[0]}, expected {params.n}")
    h = hamiltonian if hamiltonian is not None else build_hamiltonian(params)
    return -1j * h.matvec(x)


def rk4_step(params: ModelParams, state, dt: float, hamiltonian: ArrowheadHamiltonian | None = None) -> np.ndarray:
    """One classic fourth-order Runge-Kutta step (autonomous system)."""
    h = hamiltonian if hamiltonian is not None else build_hamiltonian(params)
    x = np.asarray(state, dtype=complex)
    k1 = derivative(params, x, h)
    k2 = derivative(params, x + 0.5 * dt * k1, h)
    k3 = derivative(params, x + 0.5 * dt * k2, h)
    k4 = derivative(params, x + dt * k3, h)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_matrix(params: ModelParams, dt: float) -> np.ndarray:
    """The linear map taking x_n to x_{n+1} under one RK4 step.

    Built by pushing the identity through :func:`rk4_step`; since the system
    is linear and time independent this is the same step, applied as one
    matrix-vector product.
    """
    return rk4_step(params, np.eye(params.n, dtype=complex), dt)


def _step_count(t_final: float, dt_max: float) -> int:
    return max(1, math.ceil(t_final / dt_max - 1e-9))


def integrate(
    params: ModelParams,
    t_final: float,
    dt_max: float = DEFAULT_DT_MAX,
    sample_stride: int = DEFAULT_SAMPLE_STRIDE,
    *,
    allow_coarse: bool = False,
    check_conservation: bool = True,
    initial=None,
) -> Trajectory:
    """Integrate from t = 0 to ``t_final`` with equal steps no larger than ``dt_max``.

    The state is stored every ``sample_stride`` steps and at ``t_final``.
    ``dt_max`` above 1e-3 needs ``allow_coarse=True``. With
    ``check_conservation`` a :class:`ConservationError` is raised when any
    stored sample has |p_tot - 1| > 2.5e-6; the offending trajectory is
    attached to the exception.
    """
    if not (math.isfinite(t_final) and t_final > 0):
        raise ValidationError(f"t_final must be a positive number, got {t_final!r}")
    if not (math.isfinite(dt_max) and dt_max > 0):
        raise ValidationError(f"dt_max must be a positive number, got {dt_max!r}")
    if dt_max > DEFAULT_DT_MAX and not allow_coarse:
        raise ValidationError(f"dt_max={dt_max} exceeds {DEFAULT_DT_MAX}; pass allow_coarse=True")
    if isinstance(sample_stride, bool) or int(sample_stride) != sample_stride or sample_stride < 1:
        raise ValidationError(f"sample_stride must be an integer >= 1, got {sample_stride!r}")
    sample_stride = int(sample_stride)

    nsteps = _step_count(t_final, dt_max)
    dt = t_final / nsteps
    x = initial_state(params) if initial is None else np.array(initial, dtype=complex)
    if x.shape != (params.n,):
        raise DimensionMismatchError(f"initial state has shape {x.shape}, expected ({params.n},)")

    sample_steps = list(range(0, nsteps + 1, sample_stride))
    if sample_steps[-1] != nsteps:
        sample_steps.append(nsteps)
    states = np.empty((len(sample_steps), params.n), dtype=complex)
    states[0] = x

    prop = step_matrix(params, dt)
    slot = 1
    for step in range(1, nsteps + 1):
        x = prop @ x
        if step == sample_steps[slot]:
            states[slot] = x
            slot += 1

    times = np.asarray(sample_steps, dtype=float) * dt
    times[-1] = t_final
    if not np.all(np.isfinite(states)):
        raise NonFiniteStateError("amplitudes overflowed or became NaN")

    traj = Trajectory(params, times, states, float(dt_max), sample_stride, dt)
    if check_conservation:
        norm0 = float(np.vdot(states[0], states[0]).real)
        dev = float(np.max(np.abs(traj.total_probability - norm0)))
        if dev > CONSERVATION_TOL:
            raise ConservationError(
                f"total probability drifted by {dev:.3e} (> {CONSERVATION_TOL}); reduce dt_max",
                deviation=dev,
                trajectory=traj,
            )
    return traj


def rhs_norm_preservation_check(traj: Trajectory) -> float:
    """Largest |p_tot - 1| over the stored samples."""
    return float(np.max(np.abs(traj.total_probability - 1.0)))
