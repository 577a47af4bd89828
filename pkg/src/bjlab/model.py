"""
Parameters, state labels and the arrowhead Hamiltonian of the bright-state / dark-ladder model.

Units have hbar = 1, so every energy is a frequency (inverse time). The
canonical state ordering used by every vector and matrix in the package is
the bright state first, then the dark ladder k = -m, ..., m in ascending order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    NegativeCouplingError,
    NegativeLadderError,
    NonFiniteParameterError,
    NonPositiveSpacingError,
    StateIndexError,
    ValidationError,
)

__all__ = [
    "ModelParams",
    "StateIndex",
    "BRIGHT",
    "ArrowheadHamiltonian",
    "make_params",
    "level_frequency",
    "build_hamiltonian",
    "golden_rule_gamma",
    "recurrence_time",
]


@dataclass(frozen=True)
class ModelParams:
    """One instance of the model.

    Attributes:
        m: half-width of the dark ladder, k runs over -m..m
        vbar: uniform bright-dark coupling
        epsilon: dark level spacing
        omega_s: bright state frequency
    """

    m: int
    vbar: float
    epsilon: float
    omega_s: float = 0.0

    def __post_init__(self):
        _validate(self.m, self.vbar, self.epsilon, self.omega_s)

    @property
    def n(self) -> int:
        return 2 * self.m + 2

    @property
    def ks(self) -> np.ndarray:
        return np.arange(-self.m, self.m + 1)

    def position(self, idx: "StateIndex") -> int:
        """Position of a state in the canonical ordering."""
        idx.check(self)
        return 0 if idx.is_bright else idx.k + self.m + 1


def _validate(m, vbar, epsilon, omega_s):
    for name, value in (("m", m), ("vbar", vbar), ("epsilon", epsilon), ("omega_s", omega_s)):
        try:
            finite = math.isfinite(value)
        except TypeError:
            raise ValidationError(f"{name} must be a real number, got {value!r}") from None
        if not finite:
            raise NonFiniteParameterError(f"{name} must be finite, got {value!r}")
    if isinstance(m, bool) or int(m) != m:
        raise ValidationError(f"m must be an integer, got {m!r}")
    if m < 0:
        raise NegativeLadderError(f"m must be >= 0, got {m}")
    if epsilon <= 0:
        raise NonPositiveSpacingError(f"epsilon must be > 0, got {epsilon}")
    if vbar < 0:
        raise NegativeCouplingError(f"vbar must be >= 0, got {vbar}")


def make_params(m: int, vbar: float, epsilon: float, omega_s: float = 0.0) -> ModelParams:
    """Validate and build a :class:`ModelParams`."""
    _validate(m, vbar, epsilon, omega_s)
    return ModelParams(int(m), float(vbar), float(epsilon), float(omega_s))


@dataclass(frozen=True)
class StateIndex:
    """Either the bright state (``k is None``) or the dark state ``k``."""

    k: int | None = None

    @classmethod
    def bright(cls) -> "StateIndex":
        return cls(None)

    @classmethod
    def dark(cls, k: int) -> "StateIndex":
        if isinstance(k, bool) or int(k) != k:
            raise StateIndexError(f"dark index must be an integer, got {k!r}")
        return cls(int(k))

    @property
    def is_bright(self) -> bool:
        return self.k is None

    def check(self, params: ModelParams) -> None:
        if self.k is not None and not -params.m <= self.k <= params.m:
            raise StateIndexError(f"dark index {self.k} outside [-{params.m}, {params.m}]")

    def __str__(self):
        return "s" if self.is_bright else f"k{self.k}"


BRIGHT = StateIndex.bright()


def level_frequency(params: ModelParams, idx: StateIndex) -> float:
    idx.check(params)
    if idx.is_bright:
        return params.omega_s
    return params.omega_s + idx.k * params.epsilon


@dataclass(frozen=True)
class ArrowheadHamiltonian:
    """Diagonal plus one uniform bright-dark coupling, stored as (diag, coupling)."""

    diag: np.ndarray = field(repr=False)
    coupling: float

    @property
    def n(self) -> int:
        return len(self.diag)

    @property
    def dark_levels(self) -> np.ndarray:
        return self.diag[1:]

    def dense(self) -> np.ndarray:
        """Materialize the full symmetric n x n matrix."""
        h = np.diag(self.diag).astype(float)
        h[0, 1:] = self.coupling
        h[1:, 0] = self.coupling
        return h

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """H @ x in O(n); ``x`` may carry extra trailing columns."""
        d = self.diag if x.ndim == 1 else self.diag[:, None]
        y = d * x
        y[0] += self.coupling * x[1:].sum(axis=0)
        y[1:] += self.coupling * x[0]
        return y


def build_hamiltonian(params: ModelParams) -> ArrowheadHamiltonian:
    dark = params.omega_s + params.ks * params.epsilon
    diag = np.concatenate(([params.omega_s], dark)).astype(float)
    diag.setflags(write=False)
    return ArrowheadHamiltonian(diag, params.vbar)


def golden_rule_gamma(params: ModelParams) -> float:
    """Continuum-limit decay rate 2*pi*vbar**2/epsilon."""
    return 2.0 * math.pi * params.vbar ** 2 / params.epsilon


def recurrence_time(params: ModelParams) -> float:
    """Revival period 2*pi/epsilon of the evenly spaced dark ladder."""
    return 2.0 * math.pi / params.epsilon
