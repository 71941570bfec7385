"""Quadrature rules and their Hayashi-type error bounds.

Every bound here has the shape::

    | mean(g) - Q(x) |  <=  primary(lambda)  <=  coarse

where ``mean(g)`` is the mean value of ``g`` over ``[a, b]``, ``Q`` is a
quadrature estimate built from point values of ``g`` and ``lambda`` is the
Hayashi window length ``(g(b) - g(a) - gamma*(b - a)) / (Gamma - gamma)``.

Cases ``T3``, ``T4`` and ``T5`` are the normalized forms (``0 <= g' <= b - a``);
``C1``, ``C2`` and ``C3`` are their general counterparts with
``gamma <= g' <= Gamma``.  ``DW`` (Ostrowski-Gruss, constant 1/4) and ``GS``
(symmetric two-point rule, constant 1/8) are literature bounds kept for
comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, NamedTuple, Optional, Sequence

from .errors import HypothesisViolation, MeanSlopeOutOfRange, PointOutOfRange

PROVENANCES = ("exact", "sampled-inflated", "asserted")

#: absolute slack on the mean-slope precondition of :func:`lambda_general`
SLOPE_SLACK = 1e-9


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError(f"interval endpoints must be finite, got [{a}, {b}]")
        if not a < b:
            raise ValueError(f"interval needs a < b, got [{a}, {b}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def mid(self) -> float:
        return 0.5 * (self.a + self.b)

    def __iter__(self):
        yield self.a
        yield self.b


@dataclass(frozen=True)
class DerivativeBounds:
    """Lower and upper bounds ``gamma <= g' <= Gamma``."""

    gamma: float
    Gamma: float
    provenance: str = "asserted"

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if not (math.isfinite(self.gamma) and math.isfinite(self.Gamma)):
            raise ValueError("derivative bounds must be finite")
        if self.gamma > self.Gamma:
            raise ValueError(f"gamma={self.gamma} exceeds Gamma={self.Gamma}")

    @property
    def spread(self) -> float:
        return self.Gamma - self.gamma


class Status(str, Enum):
    VERIFIED = "VERIFIED"
    CLAIMED = "CLAIMED"
    REFERENCE = "REFERENCE"


class Case(str, Enum):
    T3 = "T3"
    C1 = "C1"
    T4 = "T4"
    C2 = "C2"
    T5 = "T5"
    C3 = "C3"
    DW = "DW"
    GS = "GS"

    @property
    def status(self) -> Status:
        return _STATUS[self]

    @property
    def normalized(self) -> bool:
        """True for the cases whose hypothesis is ``0 <= g' <= b - a``."""
        return self in (Case.T3, Case.T4, Case.T5)

    @property
    def rule(self) -> str:
        return _RULE[self]

    @property
    def coarse_constant(self) -> float:
        return _COARSE[self]

    def __str__(self):
        return self.value


_STATUS = {
    Case.T3: Status.VERIFIED, Case.C1: Status.VERIFIED,
    Case.T4: Status.CLAIMED, Case.C2: Status.CLAIMED,
    Case.T5: Status.CLAIMED, Case.C3: Status.CLAIMED,
    Case.DW: Status.REFERENCE, Case.GS: Status.REFERENCE,
}

# trapezoid: generalized trapezoid plus slope correction
# point:     g(x) minus slope correction (Ostrowski type)
# symmetric: [g(x) + g(a+b-x)] / 2, x in the left half
_RULE = {
    Case.T3: "trapezoid", Case.C1: "trapezoid",
    Case.T4: "point", Case.C2: "point", Case.DW: "point",
    Case.T5: "symmetric", Case.C3: "symmetric", Case.GS: "symmetric",
}

_COARSE = {
    Case.T3: 1 / 8, Case.C1: 1 / 8,
    Case.T4: 1 / 16, Case.C2: 1 / 16,
    Case.T5: 1 / 24, Case.C3: 1 / 24,
    Case.DW: 1 / 4, Case.GS: 1 / 8,
}


def as_case(case) -> Case:
    return case if isinstance(case, Case) else Case(str(case).upper())


@dataclass(frozen=True)
class FunctionModel:
    """A real function on an interval together with its derivative.

    ``kinks`` lists interior points where ``g'`` is not smooth; integrators
    use them as forced panel boundaries.  ``deriv_range``, when present,
    returns exact ``(min, max)`` of ``g'`` over a subinterval ``(l, r)``.
    """

    eval: Callable[[float], float]
    deriv_eval: Optional[Callable[[float], float]]
    domain: Interval
    description: str = ""
    kinks: Sequence[float] = ()
    deriv_range: Optional[Callable[[float, float], tuple]] = field(default=None, compare=False)

    def __call__(self, x):
        return self.eval(x)

    def derivative(self, x):
        if self.deriv_eval is None:
            raise TypeError(f"{self.description or 'function'} has no derivative")
        return self.deriv_eval(x)


class HalfWidths(NamedTuple):
    primary: float
    coarse: float


@dataclass(frozen=True)
class BoundEvaluation:
    case: Case
    x: float
    lam: float
    mean_integral: float
    rule_value: float
    lhs: float
    half_width_primary: float
    half_width_coarse: float
    # bracket on mean(g) - generalized trapezoid; trapezoid cases only
    deviation: Optional[float] = None
    bracket_low: Optional[float] = None
    bracket_high: Optional[float] = None

    @property
    def status(self) -> Status:
        return self.case.status

    @property
    def slack_primary(self) -> float:
        return self.half_width_primary - self.lhs

    @property
    def slack_coarse(self) -> float:
        return self.half_width_coarse - self.lhs

    def bracket_holds(self, tol=1e-12) -> bool:
        if self.deviation is None:
            return True
        return self.bracket_low - tol <= self.deviation <= self.bracket_high + tol

    def as_dict(self) -> dict:
        return {
            "case": self.case.value,
            "status": self.status.value,
            "x": self.x,
            "lambda": self.lam,
            "mean_integral": self.mean_integral,
            "rule_value": self.rule_value,
            "lhs": self.lhs,
            "bracket_low": self.bracket_low,
            "bracket_high": self.bracket_high,
            "half_width_primary": self.half_width_primary,
            "half_width_coarse": self.half_width_coarse,
            "slack_primary": self.slack_primary,
            "slack_coarse": self.slack_coarse,
        }


def lambda_general(gA, gB, iv: Interval, db: DerivativeBounds, slack=SLOPE_SLACK) -> float:
    """Hayashi window length for ``h = g' - gamma`` and ``A = Gamma - gamma``.

    Returns 0 when ``Gamma == gamma`` (``g`` affine).  A mean slope inside
    the slack band but outside ``[gamma, Gamma]`` yields a value clipped to
    ``[0, b - a]``.
    """
    w = iv.width
    slope = (gB - gA) / w
    if not (db.gamma - slack <= slope <= db.Gamma + slack):
        raise MeanSlopeOutOfRange(
            f"mean slope {slope!r} outside [{db.gamma!r}, {db.Gamma!r}] on [{iv.a!r}, {iv.b!r}]"
        )
    if db.spread == 0.0:
        return 0.0
    lam = (gB - gA - db.gamma * w) / db.spread
    return min(max(lam, 0.0), w)


def case_bounds(case, iv: Interval, db: DerivativeBounds, slack=SLOPE_SLACK) -> DerivativeBounds:
    """Bounds actually used by ``case``.

    Normalized cases always use ``(0, b - a)``; the supplied bounds must lie
    inside that range.
    """
    case = as_case(case)
    if not case.normalized:
        return db
    w = iv.width
    if db.gamma < -slack or db.Gamma > w + slack:
        raise HypothesisViolation(
            f"{case.value} needs 0 <= g' <= b - a = {w!r}; got [{db.gamma!r}, {db.Gamma!r}]"
        )
    return DerivativeBounds(0.0, w, db.provenance)


def admissible(case, iv: Interval) -> tuple:
    """Closed range of evaluation points allowed for ``case``."""
    if as_case(case).rule == "symmetric":
        return iv.a, iv.mid
    return iv.a, iv.b


def _check_point(case, iv, x):
    lo, hi = admissible(case, iv)
    if not lo <= x <= hi:
        raise PointOutOfRange(f"x={x!r} outside [{lo!r}, {hi!r}] for case {as_case(case).value}")


def rule_value(case, g: Callable[[float], float], iv: Interval, x: float) -> float:
    """Quadrature estimate ``Q(x)`` of the mean value of ``g`` for ``case``."""
    case = as_case(case)
    _check_point(case, iv, x)
    a, b = iv
    w = iv.width
    if case.rule == "symmetric":
        return 0.5 * (g(x) + g(a + b - x))
    ga, gb = g(a), g(b)
    slope = (gb - ga) / w
    if case.rule == "trapezoid":
        return ((x - a) * ga + (b - x) * gb) / w + slope * (x - iv.mid)
    return g(x) - slope * (x - iv.mid)


def lambda_profile(case, lam: float, w: float) -> float:
    """The lambda-dependent factor of the primary half-width (normalized form)."""
    rule = as_case(case).rule
    if rule == "trapezoid":
        return 0.5 * lam * (w - lam)
    if rule == "point":
        return lam * w / 2 - lam * lam
    return lam * (w / 2 - 1.5 * lam)


def half_widths(case, lam: float, iv: Interval, db: DerivativeBounds) -> HalfWidths:
    """Primary (lambda form) and coarse (constant) half-widths.

    ``db`` must already be the case's effective bounds (see
    :func:`case_bounds`).  The primary width is returned unclamped, so it
    can be negative for the symmetric rule when ``lam > (b - a)/3``.
    """
    case = as_case(case)
    w = iv.width
    if not -1e-12 * w <= lam <= w * (1 + 1e-12):
        raise ValueError(f"lambda={lam!r} outside [0, {w!r}]")
    spread = db.spread
    coarse = case.coarse_constant * spread * w
    if case in (Case.DW, Case.GS):
        return HalfWidths(coarse, coarse)
    if spread == 0.0:
        return HalfWidths(0.0, 0.0)
    return HalfWidths(spread / w * lambda_profile(case, lam, w), coarse)


def evaluate_claim(case, g, iv: Interval, x: float, db: DerivativeBounds,
                   mean_integral: float, slack=SLOPE_SLACK) -> BoundEvaluation:
    """Instantiate ``case`` on ``g`` at ``x``.

    ``mean_integral`` is the mean value of ``g`` over ``iv``, computed by the
    caller (normally with :func:`quadbound.oracle.integrate`).
    """
    case = as_case(case)
    eff = case_bounds(case, iv, db, slack)
    a, b = iv
    ga, gb = g(a), g(b)
    lam = lambda_general(ga, gb, iv, eff, slack)
    q = rule_value(case, g, iv, x)
    hw = half_widths(case, lam, iv, eff)
    extra = {}
    if case.rule == "trapezoid":
        w = iv.width
        scale = eff.spread / w
        shift = eff.gamma * (x - iv.mid)
        extra = dict(
            deviation=mean_integral - ((x - a) * ga + (b - x) * gb) / w,
            bracket_low=shift + scale * (lam * (x - b) + 0.5 * lam * lam),
            bracket_high=shift + scale * (lam * (x - a) - 0.5 * lam * lam),
        )
    return BoundEvaluation(
        case=case, x=float(x), lam=lam, mean_integral=mean_integral,
        rule_value=q, lhs=abs(mean_integral - q),
        half_width_primary=hw.primary, half_width_coarse=hw.coarse, **extra,
    )


def endpoint_trapezoid_bound(gA, gB, iv: Interval, db: DerivativeBounds) -> float:
    """Classical trapezoid bound in closed form.

    ``[D - m w][M w - D] / (2 (M - m) w)`` with ``D = g(b) - g(a)`` and
    ``w = b - a``; equal to the trapezoid primary width at the midpoint.
    """
    w = iv.width
    if db.spread == 0.0:
        return 0.0
    d = gB - gA
    return (d - db.gamma * w) * (db.Gamma * w - d) / (2 * db.spread * w)
