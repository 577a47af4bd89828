# %% [markdown]
# # Revivals and the number of states
#
# A finite ladder with spacing eps rephases after T = 2 pi / eps. The returning
# amplitude grows like gamma (t - T) exp(-gamma (t - T) / 2), so the first
# revival peak arrives at T + 2/gamma, not at T itself.

# %%
import math

from bjlab import BRIGHT, detect_peaks, golden_rule_gamma, integrate, make_params, probability_series, recurrence_peak

for vbar, eps in [(0.10, 0.25), (0.05, 0.10), (0.10, 0.10)]:
    p = make_params(12, vbar, eps)
    gamma = golden_rule_gamma(p)
    t_echo = 2 * math.pi / eps + 2 / gamma
    peaks = detect_peaks(probability_series(integrate(p, min(240, t_echo + 20)), BRIGHT))
    print(f"vbar={vbar} eps={eps}: first peak t={peaks[0].time:.2f} height={peaks[0].value:.3f}"
          f"   predicted t={t_echo:.2f} height={4 * math.exp(-2):.3f}   (2pi/eps = {2 * math.pi / eps:.2f})")

# %% [markdown]
# ## Fewer states, stronger revival
#
# Shrinking the ladder leaves fewer states to hold the probability that left
# s, so the revival grows. At n = 2 it is a full Rabi oscillation.

# %%
from bjlab.cli import RunConfig, sweep_n

for row in sweep_n(RunConfig(t_final=60.0), [26, 16, 10, 8, 6, 4, 2]):
    peak = row["recurrence_peak"]
    print(f"n={row['n']:>2}  revival height {peak['value']:.3f} at t={peak['time']:.2f}"
          f"   fit rms {row['rms_residual']:.3f}")
