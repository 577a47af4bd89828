# %% [markdown]
# # Exact propagation from the eigenvalues
#
# The coupled Hamiltonian is an arrowhead matrix. Its eigenvalues are the
# roots of the secular function
#
#     f(lambda) = lambda - w_s - sum_k vbar^2 / (lambda - w_k)
#
# one per interval between neighbouring dark levels plus one on each end.

# %%
import numpy as np

from bjlab import BRIGHT, integrate, make_params, probability_series, propagate, secular_function, solve_spectrum

params = make_params(m=1, vbar=0.04, epsilon=0.25)
spec = solve_spectrum(params)
for lam, w in zip(spec.eigenvalues, spec.bright_weights):
    print(f"lambda = {lam:+.10f}   w = {w:.10f}   f = {secular_function(params, lam):+.1e}")
print("dense eigh:", np.linalg.eigvalsh(np.array([
    [0, 0.04, 0.04, 0.04], [0.04, -0.25, 0, 0], [0.04, 0, 0, 0], [0.04, 0, 0, 0.25]])))

# %% [markdown]
# With the bright weights the survival amplitude is a sum of phases,
# x_s(t) = sum_j w_j exp(-i lambda_j t). It must agree with the Runge-Kutta
# integration at every sample.

# %%
for vbar, eps, t_final in [(0.10, 0.25, 60), (0.10, 0.10, 120), (0.002, 0.10, 240)]:
    p = make_params(12, vbar, eps)
    traj = integrate(p, t_final)
    exact = np.abs(propagate(solve_spectrum(p), traj.times)) ** 2
    diff = np.max(np.abs(probability_series(traj, BRIGHT).values - exact))
    print(f"vbar={vbar:<6} eps={eps:<5} max |ode - exact| = {diff:.2e}")
