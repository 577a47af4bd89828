# %% [markdown]
# # Fitted decay rates against the golden rule
#
# For eps = 0.10 and a range of couplings, fit the exponential part of p_s
# and compare with gamma = 2 pi vbar^2 / eps.

# %%
from bjlab.cli import RunConfig, table1

for row in table1(RunConfig()):
    print(f"vbar={row['vbar']:<6} fit={row['gamma_fit']:.5g}  theory={row['gamma_theory']:.5g}"
          f"  ratio={row['ratio']:.3f}  window=({row['fit_lo']:.2f}, {row['fit_hi']:.2f})")

# %% [markdown]
# ## Where the window ends matters
#
# Past t = 2 pi / eps the first revival bends the log-plot. For weak coupling
# the decay is slow, so a straight edge laid over the first ~90 time units
# picks up that bend and reads a larger rate than the golden rule.

# %%
import math

from bjlab import BRIGHT, fit_exponential, integrate, make_params, probability_series

series = probability_series(integrate(make_params(12, 0.002, 0.10), 240.0), BRIGHT)
for hi in (30, 62.83, 80, 90, 100):
    fit = fit_exponential(series, (1.0, hi))
    print(f"window (1, {hi:>5}): gamma = {fit.gamma:.6f}   exp(-240 gamma) = {math.exp(-240 * fit.gamma):.3f}")
