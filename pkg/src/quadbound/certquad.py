"""Trapezoid integration with a certified error radius.

On a subinterval ``[l, r]`` of width ``w`` with ``gamma_s <= g' <= Gamma_s``
the trapezoid error obeys::

    | int_l^r g - (w/2)(g(l) + g(r)) |  <=  (Gamma_s - gamma_s)/2 * lam_s * (w - lam_s)

with ``lam_s = (g(r) - g(l) - gamma_s*w) / (Gamma_s - gamma_s)``.  The
radius is the sum of these bounds.  Only this bound is used: the
point-rule and two-point-rule constants do not survive auditing.
"""

from __future__ import annotations

import heapq
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

from .core import DerivativeBounds, FunctionModel, Interval, lambda_general
from .errors import BudgetExhausted
from .expr import derivative_range


@dataclass(frozen=True)
class CertifyConfig:
    max_subintervals: int = 100_000
    #: Chebyshev sample count and inflation when no exact range is available
    n_samples: int = 257
    inflation: float = 0.0
    #: absolute widening; zero keeps affine pieces exact
    pad: float = 0.0


@dataclass(frozen=True)
class CertifiedResult:
    estimate: float
    radius: float
    subintervals: int
    evaluations: int
    bound_provenance: str
    converged: bool = True
    history: tuple = field(default=(), repr=False, compare=False)


@dataclass(frozen=True)
class _Panel:
    l: float
    r: float
    gl: float
    gr: float
    estimate: float
    bound: float


def _bounds(g: FunctionModel, l, r, cfg, slope):
    if g.deriv_range is not None:
        lo, hi = g.deriv_range(l, r)
        db = DerivativeBounds(lo, hi, "exact")
    else:
        db = derivative_range(g.deriv_eval, Interval(l, r), cfg.n_samples, cfg.inflation, pad=cfg.pad)
    if not db.gamma <= slope <= db.Gamma:
        # the mean slope is a value of g' somewhere in [l, r]
        db = DerivativeBounds(min(db.gamma, slope), max(db.Gamma, slope), db.provenance)
    return db


def panel_bound(gl, gr, iv: Interval, db: DerivativeBounds) -> float:
    """Absolute trapezoid error bound on one subinterval."""
    lam = lambda_general(gl, gr, iv, db)
    return 0.5 * db.spread * lam * (iv.width - lam)


def certify(g: FunctionModel, iv: Optional[Interval] = None, tol: float = 1e-6,
            config: Optional[CertifyConfig] = None) -> CertifiedResult:
    """Integrate ``g`` over ``iv`` until the certified radius is ``<= tol``.

    Derivative bounds per subinterval come from ``g.deriv_range`` when the
    model supplies one (provenance ``exact``), otherwise from sampling the
    derivative.  If the subinterval budget runs out, the best result so far
    is returned with ``converged=False`` and a :class:`BudgetExhausted`
    warning is issued.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    cfg = config or CertifyConfig()
    iv = iv or g.domain
    f = g.eval
    evals = [0]
    provenance = "exact" if g.deriv_range is not None else "sampled-inflated"

    def make(l, r, gl, gr):
        w = r - l
        db = _bounds(g, l, r, cfg, (gr - gl) / w)
        if g.deriv_range is None:
            evals[0] += cfg.n_samples + 2
        return _Panel(l, r, gl, gr, 0.5 * w * (gl + gr), panel_bound(gl, gr, Interval(l, r), db))

    gl, gr = f(iv.a), f(iv.b)
    evals[0] += 2
    first = make(iv.a, iv.b, gl, gr)
    # max-heap on bound; ties go to the leftmost panel
    heap = [(-first.bound, first.l, first)]
    radius = first.bound
    history = [radius]
    while radius > tol and len(heap) < cfg.max_subintervals:
        _, _, p = heapq.heappop(heap)
        m = 0.5 * (p.l + p.r)
        if not p.l < m < p.r:
            heapq.heappush(heap, (-p.bound, p.l, p))
            break
        gm = f(m)
        evals[0] += 1
        left, right = make(p.l, m, p.gl, gm), make(m, p.r, gm, p.gr)
        heapq.heappush(heap, (-left.bound, left.l, left))
        heapq.heappush(heap, (-right.bound, right.l, right))
        radius += left.bound + right.bound - p.bound
        if radius <= tol:
            radius = math.fsum(item[2].bound for item in heap)
        history.append(radius)

    panels = sorted((item[2] for item in heap), key=lambda p: p.l)
    estimate = math.fsum(p.estimate for p in panels)
    radius = math.fsum(p.bound for p in panels)
    converged = radius <= tol
    if not converged:
        warnings.warn(f"radius {radius:.3g} > tol {tol:.3g} after {len(panels)} subintervals",
                      BudgetExhausted, stacklevel=2)
    return CertifiedResult(estimate, radius, len(panels), evals[0], provenance,
                           converged, tuple(history))
