# # Hayashi's bracket
#
# For p nonincreasing and 0 <= h <= A, the weighted integral of p is trapped
# between A times the integral of p over a window of length lam at the right
# end and at the left end, where lam = (1/A) * int h.

# %%
import numpy as np

from quadbound import DerivativeBounds, Interval, check_hayashi, hayashi_margins
from quadbound.families import DProfile

unit = Interval(0.0, 1.0)
t = hayashi_margins(lambda s: 1 - s, lambda s: s, 1.0, unit)
print(f"lam={t.lam:.6f}  lower={t.lower:.9f}  middle={t.middle:.9f}  upper={t.upper:.9f}")

# %% [markdown]
# Expected: 1/8, 1/6 and 3/8.
#
# Random pairs: p is a piecewise quadratic with nonpositive slope, h is a
# clamped piecewise linear function in [0, A].

# %%
rng = np.random.default_rng(1)
margins = []
for i in range(200):
    A = rng.uniform(0.5, 3.0)
    p = DProfile(6, unit, DerivativeBounds(-2.0, 0.0)).member(7, i)
    h = DProfile(6, unit, DerivativeBounds(0.0, A)).member(8, i)
    kinks = sorted(set(p.kinks) | set(h.kinks))
    margins.extend(hayashi_margins(p.model, h.model.deriv_eval, A, unit, 1e-10, kinks).margins)
margins = np.array(margins)
print(f"smallest margin over {len(margins) // 2} pairs: {margins.min():.3e}")

# %% [markdown]
# Constant p collapses the bracket, so all three members agree.

# %%
rep = check_hayashi(lambda s: 2.0, lambda s: 0.5 + 0.4 * np.sin(7 * s), 1.0, unit)
print(rep.as_dict())
