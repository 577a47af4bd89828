import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import charpoly_roots, dense_hamiltonian, expm_amplitudes, jacobi_eigh

from bjlab import (
    BRIGHT,
    StateIndex,
    initial_state,
    make_params,
    probability_series,
    propagate,
    propagate_full,
    secular_function,
    solve_spectrum,
)
from bjlab.errors import PoleError

# Jacobi-rotation eigenvalues of the 4x4 matrix (m=1, vbar=0.04, eps=0.25)
M1_EIGENVALUES = np.array([-0.25647568, -0.03899005, 0.03899005, 0.25647568])
M1_WEIGHTS = np.array([0.02551975, 0.47448025, 0.47448025, 0.02551975])


@pytest.mark.parametrize("lam", [0.1, -0.1])
def test_secular_two_level_roots(lam):
    assert secular_function(make_params(0, 0.1, 0.25), lam) == pytest.approx(0, abs=1e-16)


def test_secular_pole():
    with pytest.raises(PoleError):
        secular_function(make_params(1, 0.04, 0.25), 0.25)


def test_secular_sign_changes_bracket_dense_roots():
    p = make_params(1, 0.04, 0.25)
    roots = charpoly_roots(dense_hamiltonian(1, 0.04, 0.25))
    for r in roots:
        assert secular_function(p, r - 1e-6) < 0 < secular_function(p, r + 1e-6)
    grid = np.linspace(-0.6, 0.6, 2401)
    grid = grid[np.min(np.abs(grid[:, None] - np.array([-0.25, 0, 0.25])), axis=1) > 1e-9]
    f = np.array([secular_function(p, x) for x in grid])
    # sign flips from - to + happen only at roots; + to - only across poles
    ups = grid[1:][(f[:-1] < 0) & (f[1:] > 0)]
    assert len(ups) == 4
    np.testing.assert_allclose(ups, roots, atol=1e-3)


def test_two_level_spectrum():
    s = solve_spectrum(make_params(0, 0.1, 0.25))
    np.testing.assert_allclose(s.eigenvalues, [-0.1, 0.1], atol=1e-15)
    np.testing.assert_allclose(s.bright_weights, [0.5, 0.5], atol=1e-15)


def test_m1_spectrum_against_jacobi():
    s = solve_spectrum(make_params(1, 0.04, 0.25))
    w, v = jacobi_eigh(dense_hamiltonian(1, 0.04, 0.25))
    np.testing.assert_allclose(s.eigenvalues, w, atol=1e-12, rtol=0)
    np.testing.assert_allclose(s.bright_weights, v[0] ** 2, atol=1e-10, rtol=0)
    np.testing.assert_allclose(s.eigenvalues, M1_EIGENVALUES, atol=1e-8)
    np.testing.assert_allclose(s.bright_weights, M1_WEIGHTS, atol=1e-8)


def test_completeness_and_trace(spectrum):
    s = spectrum(12, 0.10, 0.25)
    assert abs(s.bright_weights.sum() - 1) <= 1e-12
    assert abs(s.bright_weights @ s.eigenvalues) <= 1e-10


def _check_interlacing(p, s):
    poles = np.sort(p.omega_s + p.ks * p.epsilon)
    lam = s.eigenvalues
    assert np.all(np.diff(lam) > 0)
    assert lam[0] < poles[0] and lam[-1] > poles[-1]
    for i in range(len(poles) - 1):
        inside = (lam > poles[i]) & (lam < poles[i + 1])
        assert inside.sum() == 1


@settings(max_examples=60, deadline=None)
@given(
    m=st.integers(0, 4),
    vbar=st.floats(1e-3, 0.5),
    eps=st.floats(0.02, 1.0),
    omega_s=st.floats(-1.0, 1.0),
)
def test_against_jacobi_small_n(m, vbar, eps, omega_s):
    p = make_params(m, vbar, eps, omega_s)
    s = solve_spectrum(p)
    w, v = jacobi_eigh(dense_hamiltonian(m, vbar, eps, omega_s))
    scale = max(1.0, np.abs(w).max())
    np.testing.assert_allclose(s.eigenvalues, w, atol=1e-12 * scale, rtol=0)
    np.testing.assert_allclose(s.bright_weights, v[0] ** 2, atol=1e-10, rtol=0)
    _check_interlacing(p, s)
    assert abs(s.bright_weights.sum() - 1) <= 1e-12
    assert abs(s.bright_weights @ s.eigenvalues - omega_s) <= 1e-10


@pytest.mark.parametrize("vbar, eps", [(0.10, 0.25), (0.04, 0.25), (0.075, 0.10), (0.002, 0.10), (0.10, 0.10)])
def test_interlacing_reference_sets(spectrum, vbar, eps):
    _check_interlacing(make_params(12, vbar, eps), spectrum(12, vbar, eps))


def test_resonant_bright_level_is_bracketed():
    # omega_s sits exactly on the k = 0 pole; still n simple roots
    s = solve_spectrum(make_params(12, 1e-4, 0.25))
    assert len(s.eigenvalues) == 26
    assert np.all(np.diff(s.eigenvalues) > 0)


def test_uncoupled_spectrum():
    p = make_params(2, 0.0, 0.25, 0.1)
    s = solve_spectrum(p)
    np.testing.assert_array_equal(s.eigenvalues, np.sort(np.r_[0.1, 0.1 + 0.25 * np.arange(-2, 3)]))
    assert s.bright_weights.sum() == 1
    assert propagate_full(p, s, 3.0)[0] == pytest.approx(np.exp(-0.3j))


def test_propagate_at_zero():
    assert propagate(solve_spectrum(make_params(12, 0.1, 0.25)), 0.0) == pytest.approx(1, abs=1e-13)


def test_propagate_two_level():
    s = solve_spectrum(make_params(0, 0.1, 0.25))
    t = np.linspace(0, 100, 501)
    np.testing.assert_allclose(propagate(s, t), np.cos(0.1 * t), atol=1e-13)


def test_propagate_bounded(spectrum):
    t = np.linspace(0, 500, 5001)
    assert np.all(np.abs(propagate(spectrum(12, 0.1, 0.25), t)) <= 1 + 1e-12)


def test_two_level_recurrence_period():
    s = solve_spectrum(make_params(0, 0.1, 0.25))
    assert abs(propagate(s, np.pi / 0.1)) ** 2 == pytest.approx(1, abs=1e-3)


def test_propagate_full_initial():
    p = make_params(12, 0.075, 0.10)
    s = solve_spectrum(p)
    np.testing.assert_allclose(propagate_full(p, s, 0.0), initial_state(p), atol=1e-10)


def test_propagate_full_norm_and_mirror():
    p = make_params(12, 0.075, 0.10)
    s = solve_spectrum(p)
    x = propagate_full(p, s, np.linspace(0, 120, 241))
    prob = np.abs(x) ** 2
    np.testing.assert_allclose(prob.sum(axis=1), 1, atol=1e-10)
    np.testing.assert_allclose(prob[:, 1:], prob[:, :0:-1], atol=1e-10)


def test_propagate_full_matches_expm():
    p = make_params(4, 0.1, 0.25, 0.05)
    s = solve_spectrum(p)
    t = np.array([0.5, 7.0, 33.0])
    np.testing.assert_allclose(propagate_full(p, s, t), expm_amplitudes(dense_hamiltonian(4, 0.1, 0.25, 0.05), t),
                               atol=1e-12)


@pytest.mark.parametrize("args", [(12, 0.10, 0.25, 60.0), (12, 0.10, 0.10, 120.0), (12, 0.002, 0.10, 240.0)])
def test_ode_matches_spectral_survival(run, spectrum, args):
    traj = run(*args)
    exact = np.abs(propagate(spectrum(*args[:3]), traj.times)) ** 2
    np.testing.assert_allclose(probability_series(traj, BRIGHT).values, exact, atol=1e-6, rtol=0)


def test_ode_matches_spectral_dark_states(run, spectrum):
    traj = run(12, 0.075, 0.10, 120.0)
    p = traj.params
    exact = np.abs(propagate_full(p, spectrum(12, 0.075, 0.10), traj.times)) ** 2
    for k in (0, 8, 12):
        got = probability_series(traj, StateIndex.dark(k)).values
        np.testing.assert_allclose(got, exact[:, p.position(StateIndex.dark(k))], atol=1e-6, rtol=0)
