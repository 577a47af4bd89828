"""Brute-force reference computations used only by the tests.

Nothing here calls into the secular-equation or Runge-Kutta code paths.
"""

import math

import numpy as np
import scipy.linalg


def dense_hamiltonian(m, vbar, epsilon, omega_s=0.0):
    n = 2 * m + 2
    h = np.zeros((n, n))
    h[0, 0] = omega_s
    for i, k in enumerate(range(-m, m + 1), start=1):
        h[i, i] = omega_s + k * epsilon
        h[0, i] = h[i, 0] = vbar
    return h


def jacobi_eigh(a, tol=1e-15, max_sweeps=100):
    """Cyclic Jacobi rotations for a real symmetric matrix.

    Returns ascending eigenvalues and the matching orthonormal eigenvectors
    as columns.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    scale = max(np.abs(a).max(), 1e-300)
    for _ in range(max_sweeps):
        off = math.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                v = v @ rot
    else:
        raise RuntimeError("Jacobi sweeps did not converge")
    w = np.diag(a)
    order = np.argsort(w)
    return w[order], v[:, order]


def charpoly_roots(h):
    """Eigenvalues as roots of the characteristic polynomial (small n only)."""
    return np.sort(np.roots(np.poly(h)).real)


def expm_amplitudes(h, times, x0=None):
    """Exact amplitudes exp(-i H t) x0 by dense matrix exponential."""
    n = h.shape[0]
    if x0 is None:
        x0 = np.zeros(n, dtype=complex)
        x0[0] = 1.0
    return np.array([scipy.linalg.expm(-1j * h * t) @ x0 for t in np.atleast_1d(times)])


def rabi_survival(vbar, t):
    """Degenerate two-level survival probability cos^2(vbar t)."""
    return np.cos(vbar * np.asarray(t)) ** 2


def echo_peak(vbar, epsilon):
    """First revival of an evenly spaced quasi-continuum.

    For t between T = 2 pi/epsilon and 2T the infinite ladder gives a returning
    amplitude gamma (t - T) exp(-gamma (t - T)/2), whose square peaks at
    t - T = 2/gamma with height 4/e^2.
    """
    gamma = 2 * math.pi * vbar ** 2 / epsilon
    return 2 * math.pi / epsilon + 2 / gamma, 4 * math.exp(-2)
