# # Auditing the bounds for counterexamples
#
# The auditor samples a function family, scans the admissible x on a grid,
# hill-climbs the most promising candidates and re-verifies the winner with
# a tighter quadrature tolerance.

# %%
import time

from quadbound import AuditConfig, audit
from quadbound.families import family_by_name

cfg = AuditConfig(samples=300, seed=7, threads=1)
for case in ("C1", "T3", "DW", "GS", "C2", "T4", "C3", "T5"):
    t0 = time.perf_counter()
    rep = audit(case, family_by_name("dprofile"), cfg)
    print(f"{case:3} [{rep.status.value:9}] {rep.verdict:19} "
          f"primary {rep.worst_violation_primary:+.3e}  coarse {rep.worst_violation_coarse:+.3e}  "
          f"({time.perf_counter() - t0:.1f}s)")

# %% [markdown]
# The witness is reproducible from its parameters.

# %%
from quadbound import violation
from quadbound.families import DProfile

rep = audit("C3", family_by_name("dprofile"), cfg)
w = rep.witness
m = DProfile().build(w.theta)
print(violation("C3", m.model, m.interval, w.x, m.bounds, 1e-12, m.kinks).primary)
print(rep.to_json())

# %% [markdown]
# Sharpness: coarse constants against the largest deviation seen.

# %%
from quadbound import Case, Interval
from quadbound.auditor import sharpness_csv, sharpness_table

rows = sharpness_table(list(Case), Interval(0.0, 1.0), 0.0, 1.0, AuditConfig(samples=100, threads=1))
print(sharpness_csv(rows))
