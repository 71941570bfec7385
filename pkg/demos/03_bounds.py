# # Evaluating the trapezoid-type bounds
#
# Each case pairs a rule Q(x) with a primary half-width that depends on lam
# and a coarse half-width that does not. We evaluate them on x^2 and x^2/2.

# %%
from quadbound import Case, DerivativeBounds, Interval, evaluate_claim
from quadbound.core import endpoint_trapezoid_bound
from quadbound.oracle import mean_value

unit = Interval(0.0, 1.0)
sq = lambda s: s * s
ev = evaluate_claim("C1", sq, unit, 0.5, DerivativeBounds(0.0, 2.0, "exact"), mean_value(sq, unit))
print(f"lhs {ev.lhs:.6f}  primary {ev.half_width_primary}  coarse {ev.half_width_coarse}  "
      f"slack {ev.slack_primary:.6f}  bracket [{ev.bracket_low:.6f}, {ev.bracket_high:.6f}]")

# %% [markdown]
# At the midpoint the general trapezoid bound reduces to the classical closed
# form in terms of g(a), g(b) and the derivative bounds.

# %%
print(endpoint_trapezoid_bound(0.0, 1.0, unit, DerivativeBounds(0.0, 2.0, "exact")))

# %% [markdown]
# All eight cases on g = x^2/2 with 0 <= g' <= 1. Negative slack means the
# stated bound fails on this instance.

# %%
half = lambda s: s * s / 2
mean = mean_value(half, unit)
db = DerivativeBounds(0.0, 1.0, "exact")
print(f"{'case':5}{'status':11}{'x':>6}{'lhs':>11}{'primary':>11}{'coarse':>11}")
for case in Case:
    for x in (0.0, 0.5):
        e = evaluate_claim(case, half, unit, x, db, mean)
        print(f"{case.value:5}{case.status.value:11}{x:6.2f}{e.lhs:11.6f}"
              f"{e.half_width_primary:11.6f}{e.half_width_coarse:11.6f}")
