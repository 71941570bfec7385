"""Numerical check of Hayashi's bracket.

For ``p`` nonincreasing on ``[a, b]`` and ``0 <= h <= A``, with
``lam = (1/A) * integral(h)``::

    A * int_{b-lam}^{b} p  <=  int_a^b p*h  <=  A * int_a^{a+lam} p

Steffensen's inequality is the case ``A = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Interval
from .errors import LambdaOutOfRange, NotNonincreasing, RangeViolation
from .oracle import integrate, integrate_product

N_PROBE = 1024
SLACK = 1e-9


@dataclass(frozen=True)
class HayashiTriple:
    lower: float
    middle: float
    upper: float
    lam: float

    @property
    def margins(self):
        return self.middle - self.lower, self.upper - self.middle


@dataclass(frozen=True)
class HayashiReport:
    triple: HayashiTriple
    passed: bool
    tol: float

    @property
    def margins(self):
        return self.triple.margins

    def as_dict(self):
        t = self.triple
        lo, hi = t.margins
        return {"lower": t.lower, "middle": t.middle, "upper": t.upper, "lambda": t.lam,
                "margin_lower": lo, "margin_upper": hi, "pass": self.passed}


def _probe(f, iv):
    ts = np.linspace(iv.a, iv.b, N_PROBE)
    return ts, np.array([f(float(t)) for t in ts])


def _check_inputs(p, h, A, iv):
    ts, pv = _probe(p, iv)
    # slack scales with the observed range; the eps term absorbs rounding in flat p
    slack = SLACK * float(np.ptp(pv)) + 1e-15 * float(np.max(np.abs(pv)))
    rises = np.diff(pv) > slack
    if rises.any():
        raise NotNonincreasing(float(ts[int(np.argmax(rises)) + 1]))
    ts, hv = _probe(h, iv)
    bad = (hv < -SLACK) | (hv > A + SLACK)
    if bad.any():
        i = int(np.argmax(bad))
        raise RangeViolation(float(ts[i]), float(hv[i]), A)


def hayashi_margins(p, h, A: float, iv: Interval, tol: float = 1e-10, splits=None) -> HayashiTriple:
    """Compute the three members of the bracket.

    ``p`` and ``h`` are checked by sampling only.  ``splits`` are kinks of
    ``p`` or ``h`` passed on to the integrator.
    """
    if not A > 0:
        raise ValueError("A must be positive")
    _check_inputs(p, h, A, iv)
    w = iv.width
    lam = integrate(h, iv, tol, splits).value / A
    if not -SLACK * w <= lam <= w * (1 + SLACK):
        raise LambdaOutOfRange(f"lambda={lam!r} outside [0, {w!r}]")
    lam = min(max(lam, 0.0), w)
    middle = integrate_product(p, h, iv, tol, splits).value
    # windows of zero length contribute nothing
    lower = A * integrate(p, Interval(iv.b - lam, iv.b), tol, splits).value if lam > 0 else 0.0
    upper = A * integrate(p, Interval(iv.a, iv.a + lam), tol, splits).value if lam > 0 else 0.0
    return HayashiTriple(lower, middle, upper, lam)


def check_hayashi(p, h, A: float, iv: Interval, tol: float = 1e-10, splits=None) -> HayashiReport:
    """Fail only when a margin falls below ``-10 * tol``."""
    triple = hayashi_margins(p, h, A, iv, tol, splits)
    passed = min(triple.margins) >= -10 * tol
    return HayashiReport(triple, passed, tol)


def steffensen_margins(p, h, iv: Interval, tol: float = 1e-10, splits=None) -> HayashiTriple:
    return hayashi_margins(p, h, 1.0, iv, tol, splits)
