# %% [markdown]
# # Survival probability of the bright state
#
# A bright state s coupled with strength vbar to a ladder of 25 dark levels
# spaced by eps. We integrate the amplitude equations, look at p_s(t) and the
# first few dark populations, and fit the exponential part of the decay.

# %%
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from bjlab import BRIGHT, StateIndex, fit_decay, golden_rule_gamma, integrate, make_params, probability_series

OUT = Path(__file__).with_suffix("").parent / "output"
OUT.mkdir(exist_ok=True)

params = make_params(m=12, vbar=0.10, epsilon=0.25)
traj = integrate(params, t_final=60.0)
print(f"n = {params.n} states, {len(traj.times)} samples, step {traj.dt}")

# %% [markdown]
# Total probability is never renormalized, so its drift is a direct check
# on the integrator.

# %%
print("max |p_tot - 1| =", np.max(np.abs(traj.total_probability - 1)))

# %%
ps = probability_series(traj, BRIGHT)
fig, ax = plt.subplots(1, 2, figsize=(10, 4))
ax[0].plot(ps.times, ps.values, "k-", label="p_s")
for k, style in ((0, ":"), (1, "--")):
    ax[0].plot(traj.times, probability_series(traj, StateIndex.dark(k)).values, style, label=f"p_{k}")
ax[0].set_xlabel("t")
ax[0].legend()

# %% [markdown]
# On a log scale the decay is a straight line once the short-time shoulder is
# over, with small ripples riding on it. The fit window is chosen
# automatically and stops before the first revival.

# %%
fit = fit_decay(traj)
print(f"fitted gamma = {fit.gamma:.4f} over {fit.window}, rms = {fit.rms_residual:.3g}")
print(f"golden rule  = {golden_rule_gamma(params):.4f}")

early = ps.times <= 20
ax[1].semilogy(ps.times[early], ps.values[early], "k-")
ax[1].semilogy(ps.times[early], fit.predict(ps.times[early]), "r--", label=f"gamma={fit.gamma:.3f}")
ax[1].set_xlabel("t")
ax[1].legend()
fig.tight_layout()
fig.savefig(OUT / "survival.png", dpi=120)

# %% [markdown]
# ## Zero slope at t = 0
#
# An exponential has slope -gamma at the origin; the true survival probability
# leaves 1 quadratically, 1 - p_s ~ (2m+1) vbar^2 t^2.

# %%
from bjlab import short_time_coefficient

c = short_time_coefficient(ps, 0.05)
print(f"quadratic coefficient {c:.5f}  vs  (2m+1) vbar^2 = {(2 * params.m + 1) * params.vbar ** 2:.5f}")
print(f"crossover with the exponential near t = {fit.gamma / c:.2f}")
