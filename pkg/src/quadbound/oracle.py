"""Reference integrator: adaptive Simpson with Richardson acceptance.

A panel ``[l, r]`` is accepted when the two half-panel Simpson sums agree
with the whole-panel sum to ``15 * tol * (r - l) / (b - a)``; the accepted
value carries the usual Richardson correction ``(S2 - S1) / 15``.  Panels
are summed in left-to-right order with :func:`math.fsum`, so results are
bit-stable for a given input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .core import Interval
from .errors import NoConvergence

MAX_DEPTH = 60


@dataclass(frozen=True)
class OracleResult:
    value: float
    err_estimate: float
    evaluations: int


def _segments(iv: Interval, splits: Optional[Iterable[float]]):
    pts = [iv.a]
    for s in sorted(set(splits or ())):
        if iv.a < s < iv.b and s > pts[-1]:
            pts.append(float(s))
    pts.append(iv.b)
    return list(zip(pts[:-1], pts[1:]))


def integrate(f: Callable[[float], float], iv: Interval, tol: float = 1e-10,
              splits: Optional[Iterable[float]] = None, min_depth: int = 2) -> OracleResult:
    """Integrate ``f`` over ``iv`` to absolute tolerance ``tol``.

    ``splits`` are interior points where panels must break (kinks of a
    piecewise integrand).  Every segment is bisected at least ``min_depth``
    times before a panel may be accepted; this guards against periodic
    integrands fooling the first comparison.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    total_width = iv.width
    values, errors = [], []
    n_eval = 0

    for lo, hi in _segments(iv, splits):
        f_lo, f_hi, f_mid = f(lo), f(hi), f(0.5 * (lo + hi))
        n_eval += 3
        whole = (hi - lo) / 6 * (f_lo + 4 * f_mid + f_hi)
        # depth-first, left child processed first
        stack = [(lo, hi, f_lo, f_mid, f_hi, whole, 0)]
        while stack:
            l, r, fl, fm, fr, s, depth = stack.pop()
            m = 0.5 * (l + r)
            flm, frm = f(0.5 * (l + m)), f(0.5 * (m + r))
            n_eval += 2
            left = (m - l) / 6 * (fl + 4 * flm + fm)
            right = (r - m) / 6 * (fm + 4 * frm + fr)
            diff = (left + right - s) / 15
            if depth >= min_depth and abs(diff) <= tol * (r - l) / total_width:
                values.append(left + right + diff)
                errors.append(abs(diff))
                continue
            if depth + 1 >= MAX_DEPTH:
                raise NoConvergence(f"no convergence near [{l!r}, {r!r}] after {MAX_DEPTH} bisections")
            stack.append((m, r, fm, frm, fr, right, depth + 1))
            stack.append((l, m, fl, flm, fm, left, depth + 1))

    return OracleResult(math.fsum(values), math.fsum(errors), n_eval)


def integrate_product(p: Callable[[float], float], h: Callable[[float], float], iv: Interval,
                      tol: float = 1e-10, splits=None, min_depth: int = 2) -> OracleResult:
    """Integral of the pointwise product ``p * h``."""
    return integrate(lambda t: p(t) * h(t), iv, tol, splits, min_depth)


def mean_value(f, iv: Interval, tol: float = 1e-12, splits=None) -> float:
    """``(1/(b-a)) * integral of f``, integrated to ``tol * (b - a)``."""
    return integrate(f, iv, tol * iv.width, splits).value / iv.width
