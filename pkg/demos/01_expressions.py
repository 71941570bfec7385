# # Expressions and derivative ranges
#
# Integrands are written as plain strings. The parser builds a small tree,
# which we can evaluate, print back and differentiate symbolically.
# Unary minus binds tighter than `^`, so a Gaussian is written exp(-(x^2)).

# %%
import numpy as np

from quadbound import Interval
from quadbound.expr import derivative_range, differentiate, evaluate, parse, to_string

f = parse("x*sin(x) + exp(-(x^2))")
print(to_string(f))
print(evaluate(f, 1.0))
print(evaluate(parse("-x^2"), 3.0), evaluate(parse("-(x^2)"), 3.0))

# %% [markdown]
# The derivative is another tree. `abs` differentiates to `sign(u)*u'`.

# %%
df = differentiate(f)
print(to_string(df))
print(to_string(differentiate(parse("abs(x - 1)"))))

# %% [markdown]
# Bounds on g' come from sampling at Chebyshev nodes plus both endpoints,
# then widening each side by a fraction of the observed range.

# %%
iv = Interval(0.0, np.pi)
for infl in (0.0, 0.01, 0.05):
    db = derivative_range(parse("cos(x)"), iv, n=256, inflation=infl)
    print(f"inflation {infl:<5} gamma {db.gamma:+.6f}  Gamma {db.Gamma:+.6f}  ({db.provenance})")

# %% [markdown]
# Errors carry the offending position.

# %%
from quadbound import ParseError

for text in ("ln(x", "2**x", "sin x"):
    try:
        parse(text)
    except ParseError as exc:
        print(f"{text!r:10} -> position {exc.position}: {exc.message}")
