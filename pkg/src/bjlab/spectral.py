"""
Exact eigen-solution of the arrowhead Hamiltonian.

Eliminating the dark amplitudes from H v = lambda v gives the secular equation

    f(lambda) = lambda - w_s - sum_k vbar**2 / (lambda - w_k) = 0,

whose n roots are the eigenvalues. f is strictly increasing between the
dark-level poles, so every root sits alone in a known bracket: one below the
lowest pole, one above the highest, one between each pair of neighbours.
The normalized eigenvector for root lambda_j has bright component c_s with
c_s**2 = 1 / (1 + sum_k vbar**2/(lambda_j - w_k)**2) and dark components
c_k = vbar c_s / (lambda_j - w_k). Propagating the bright initial state is then
a finite sum of phases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, PoleError
from .model import ModelParams, build_hamiltonian

__all__ = [
    "ArrowheadSpectrum",
    "secular_function",
    "secular_derivative",
    "solve_spectrum",
    "propagate",
    "propagate_full",
]

_BISECT_RTOL = 1e-8
_NEWTON_RTOL = 1e-13
_POLE_CLEARANCE = 1e-14
_MAX_ITER = 200


@dataclass(frozen=True)
class ArrowheadSpectrum:
    """Sorted eigenvalues and squared bright-state overlaps w_j = |<s|lambda_j>|**2."""

    eigenvalues: np.ndarray = field(repr=False)
    bright_weights: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


def _dark_levels(params: ModelParams) -> np.ndarray:
    return build_hamiltonian(params).dark_levels


def _terms(params, poles, lam):
    gaps = lam - poles
    if np.any(gaps == 0.0):
        raise PoleError(f"lambda={lam!r} coincides with a dark level")
    return params.vbar ** 2 / gaps, gaps


def secular_function(params: ModelParams, lam: float) -> float:
    """f(lambda); zero exactly at the eigenvalues of the coupled Hamiltonian."""
    terms, _ = _terms(params, _dark_levels(params), float(lam))
    return math.fsum(np.concatenate(([lam, -params.omega_s], -terms)))


def secular_derivative(params: ModelParams, lam: float) -> float:
    _, gaps = _terms(params, _dark_levels(params), float(lam))
    return 1.0 + math.fsum(params.vbar ** 2 / gaps ** 2)


def _refine_root(params, poles, lo, hi):
    """Root of the increasing secular function inside (lo, hi).

    Bisection narrows the bracket, then Newton polishes; a Newton step that
    leaves the current bracket is replaced by a bisection step.
    """
    v2 = params.vbar ** 2
    omega_s = params.omega_s

    def f_and_df(lam):
        gaps = lam - poles
        terms = v2 / gaps
        return math.fsum(np.concatenate(([lam, -omega_s], -terms))), 1.0 + math.fsum(terms / gaps)

    scale = max(params.epsilon, abs(lo), abs(hi))
    for _ in range(_MAX_ITER):
        if hi - lo <= _BISECT_RTOL * scale:
            break
        mid = 0.5 * (lo + hi)
        fm, _ = f_and_df(mid)
        if fm == 0.0:
            return mid
        if fm < 0.0:
            lo = mid
        else:
            hi = mid
    else:
        raise ConvergenceError(f"bisection did not narrow bracket ({lo}, {hi})")

    lam = 0.5 * (lo + hi)
    for _ in range(_MAX_ITER):
        fl, dfl = f_and_df(lam)
        if fl == 0.0:
            return lam
        if fl < 0.0:
            lo = max(lo, lam)
        else:
            hi = min(hi, lam)
        step = fl / dfl
        new = lam - step
        if not lo <= new <= hi:
            new = 0.5 * (lo + hi)
        tol = _NEWTON_RTOL * max(abs(new), params.epsilon)
        if abs(new - lam) <= tol or hi - lo <= tol:
            return new
        lam = new
    raise ConvergenceError(f"Newton polishing did not converge in ({lo}, {hi})")


def _brackets(params, poles):
    """One open interval per eigenvalue, clipped slightly away from the poles."""
    spread = params.vbar * params.n + params.epsilon
    low = min(poles[0], params.omega_s) - spread
    high = max(poles[-1], params.omega_s) + spread
    edges = np.concatenate(([low], poles, [high]))
    out = []
    for a, b in zip(edges[:-1], edges[1:]):
        gap = _POLE_CLEARANCE * max(abs(a), abs(b), params.epsilon)
        lo = a if a == low else a + gap
        hi = b if b == high else b - gap
        out.append((lo, hi))
    return out


def solve_spectrum(params: ModelParams) -> ArrowheadSpectrum:
    """Eigenvalues and bright weights by bracketed root finding of the secular equation."""
    h = build_hamiltonian(params)
    if params.vbar == 0.0:
        order = np.argsort(h.diag, kind="stable")
        weights = np.zeros(params.n)
        weights[np.flatnonzero(order == 0)[0]] = 1.0
        return ArrowheadSpectrum(h.diag[order].copy(), weights)

    poles = np.asarray(h.dark_levels, dtype=float)
    roots = []
    for lo, hi in _brackets(params, poles):
        terms_lo, _ = _terms(params, poles, lo)
        terms_hi, _ = _terms(params, poles, hi)
        f_lo = lo - params.omega_s - terms_lo.sum()
        f_hi = hi - params.omega_s - terms_hi.sum()
        if not (f_lo < 0.0 < f_hi):
            raise ConvergenceError(f"secular function not bracketed on ({lo}, {hi})")
        roots.append(_refine_root(params, poles, lo, hi))
    eig = np.asarray(roots)
    gaps = eig[:, None] - poles[None, :]
    weights = 1.0 / (1.0 + params.vbar ** 2 * np.sum(1.0 / gaps ** 2, axis=1))
    return ArrowheadSpectrum(eig, weights)


def propagate(spectrum: ArrowheadSpectrum, t):
    """Exact bright amplitude x_s(t) = sum_j w_j exp(-i lambda_j t); ``t`` may be an array."""
    t = np.asarray(t, dtype=float)
    phases = np.exp(-1j * np.multiply.outer(t, spectrum.eigenvalues))
    return phases @ spectrum.bright_weights


def propagate_full(params: ModelParams, spectrum: ArrowheadSpectrum, t):
    """Exact amplitude vector at time ``t`` in canonical ordering.

    For an array of times the result has shape (len(t), n).
    """
    t = np.asarray(t, dtype=float)
    poles = _dark_levels(params)
    if params.vbar == 0.0:
        out = np.zeros(t.shape + (params.n,), dtype=complex)
        out[..., 0] = np.exp(-1j * params.omega_s * t)
        return out
    eig = spectrum.eigenvalues
    w = spectrum.bright_weights
    # amplitude of eigenvector j on dark k times its bright amplitude
    dark_coeff = params.vbar * w[:, None] / (eig[:, None] - poles[None, :])
    coeff = np.concatenate((w[:, None], dark_coeff), axis=1)
    phases = np.exp(-1j * np.multiply.outer(t, eig))
    return phases @ coeff
