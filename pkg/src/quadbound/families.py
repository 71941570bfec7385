"""Parametrized test-function families with exact derivative bounds.

Each family maps a parameter vector ``theta`` to a :class:`Member`: a
:class:`FunctionModel`, bounds ``gamma <= g' <= Gamma`` that hold exactly,
and the kink locations of ``g'``.  Members are reproducible from
``(seed, index)`` through :func:`sample_family`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np

from .core import DerivativeBounds, FunctionModel, Interval
from .errors import BadFamilyParameters


@dataclass(frozen=True)
class Member:
    model: FunctionModel
    bounds: DerivativeBounds
    kinks: Tuple[float, ...]
    theta: Tuple[float, ...]
    source: "Family" = field(repr=False)
    tag: str = ""

    @property
    def interval(self) -> Interval:
        return self.model.domain

    def rebuild(self, theta) -> "Member":
        return self.source.build(theta)


class Family:
    tag = "family"
    #: finite member count, or None for unbounded families
    size: Optional[int] = None

    def draw(self, rng: np.random.Generator, index: int) -> tuple:
        raise NotImplementedError

    def build(self, theta) -> Member:
        raise NotImplementedError

    def free(self, theta) -> tuple:
        """Indices of ``theta`` that a local search may move."""
        return ()

    def step_scale(self, theta, i) -> float:
        return 1.0

    def clip(self, theta) -> tuple:
        """Project ``theta`` back into the family's parameter box."""
        return tuple(theta)

    def member(self, seed: int, index: int) -> Member:
        rng = np.random.default_rng([int(seed), int(index)])
        return self.build(self.draw(rng, index))


def sample_family(family: Family, seed: int, index: int) -> Member:
    """Deterministic member ``index`` of ``family`` for ``seed``."""
    if index < 0:
        raise BadFamilyParameters("index must be non-negative")
    return family.member(seed, index)


def _affine_image(iv, bounds):
    iv = iv or Interval(0.0, 1.0)
    bounds = bounds or DerivativeBounds(0.0, 1.0, "exact")
    return iv, bounds


@dataclass(frozen=True)
class Canonical(Family):
    """Three closed-form members on ``[0, 1]`` with ``0 <= g' <= 1``.

    0: ``x``; 1: ``x^2/2``; 2: ``min(x, 1/2)``.  With ``interval`` and
    ``bounds`` given, each is mapped to
    ``gamma*(t-a) + (Gamma-gamma)*w*g0((t-a)/w)``.
    """

    interval: Optional[Interval] = None
    bounds: Optional[DerivativeBounds] = None
    tag = "canonical"
    size = 3

    def draw(self, rng, index):
        return (float(index % 3),)

    def build(self, theta):
        k = int(theta[0])
        if k not in (0, 1, 2):
            raise BadFamilyParameters(f"canonical index {k} not in 0..2")
        base = [
            (lambda s: s, lambda s: 1.0, "x", ()),
            (lambda s: 0.5 * s * s, lambda s: s, "x^2/2", ()),
            (lambda s: min(s, 0.5), lambda s: 1.0 if s < 0.5 else 0.0, "min(x,1/2)", (0.5,)),
        ][k]
        g0, d0, text, kinks0 = base
        iv, db = _affine_image(self.interval, self.bounds)
        a, w, lo, sp = iv.a, iv.width, db.gamma, db.spread
        if (a, w, lo, sp) == (0.0, 1.0, 0.0, 1.0):
            g, dg, desc = g0, d0, text
        else:
            def g(t):
                return lo * (t - a) + sp * w * g0((t - a) / w)

            def dg(t):
                return lo + sp * d0((t - a) / w)

            desc = f"{lo!r}*(t-{a!r}) + {sp * w!r}*[{text}]((t-{a!r})/{w!r})"
        kinks = tuple(a + w * s for s in kinks0)

        # every canonical g' is monotone, so the endpoints carry its range
        def drange(l, r):
            vals = (dg(l), dg(r))
            return min(vals), max(vals)

        model = FunctionModel(g, dg, iv, desc, kinks, drange)
        return Member(model, DerivativeBounds(db.gamma, db.Gamma, "exact"), kinks, (float(k),), self, self.tag)


@dataclass(frozen=True)
class Polynomial(Family):
    """Polynomials ``sum c_j s^j`` in ``s = (t - a)/(b - a)``.

    ``theta = (a, b, c_0, ..., c_d)``.  Derivative bounds come from the
    endpoints and the real roots of ``g''`` inside the interval.
    """

    degree: int = 2
    box: float = 1.0
    tag = "polynomial"

    def __post_init__(self):
        if self.degree < 1 or self.box <= 0:
            raise BadFamilyParameters("polynomial family needs degree >= 1 and box > 0")

    def draw(self, rng, index):
        a = rng.uniform(-1.0, 1.0)
        w = rng.uniform(0.5, 2.0)
        c = rng.uniform(-self.box, self.box, self.degree + 1)
        return (a, a + w, *c)

    def free(self, theta):
        return tuple(range(3, len(theta)))

    def step_scale(self, theta, i):
        return self.box

    def clip(self, theta):
        return tuple(theta[:2]) + tuple(min(max(c, -self.box), self.box) for c in theta[2:])

    def build(self, theta):
        theta = tuple(float(v) for v in theta)
        a, b, coeffs = theta[0], theta[1], theta[2:]
        if len(coeffs) != self.degree + 1:
            raise BadFamilyParameters(f"expected {self.degree + 1} coefficients")
        iv = Interval(a, b)
        w = iv.width
        p = np.polynomial.Polynomial(coeffs)
        dp = p.deriv()
        ddp = dp.deriv()
        c = list(coeffs)
        dc = [j * c[j] / w for j in range(1, len(c))]
        crit = [float(r.real) for r in ddp.roots() if abs(r.imag) < 1e-12] if ddp.degree() > 0 else []

        def g(t):
            s = (t - a) / w
            acc = 0.0
            for cj in reversed(c):
                acc = acc * s + cj
            return acc

        def dg(t):
            s = (t - a) / w
            acc = 0.0
            for cj in reversed(dc):
                acc = acc * s + cj
            return acc

        def drange(l, r):
            sl, sr = (l - a) / w, (r - a) / w
            pts = [l, r] + [a + w * s for s in crit if sl < s < sr]
            vals = [dg(t) for t in pts]
            pad = 1e-12 * (1.0 + max(abs(v) for v in vals))
            return min(vals) - pad, max(vals) + pad

        lo, hi = drange(a, b)
        desc = " + ".join(f"{cj!r}*s^{j}" for j, cj in enumerate(c)) + f", s=(t-{a!r})/{w!r}"
        model = FunctionModel(g, dg, iv, desc, (), drange)
        tag = "quadratic" if self.degree == 2 else self.tag
        return Member(model, DerivativeBounds(lo, hi, "exact"), (), theta, self, tag)


@dataclass(frozen=True)
class DProfile(Family):
    """Functions whose derivative is piecewise linear through ``k`` nodes.

    ``theta = (a, b, gamma, Gamma, g(a), v_0, ..., v_{k-1})``.  The node
    values are clamped to ``[gamma, Gamma]`` and interpolated linearly, so
    those clamp values bound ``g'`` exactly; ``g`` is the exact integral.
    With ``interval``/``bounds`` set, those parts of ``theta`` are fixed.
    """

    k: int = 6
    interval: Optional[Interval] = None
    bounds: Optional[DerivativeBounds] = None
    tag = "dprofile"

    def __post_init__(self):
        if self.k < 2:
            raise BadFamilyParameters("dprofile needs at least 2 nodes")

    def draw(self, rng, index):
        if self.interval is None:
            a = rng.uniform(-1.0, 1.0)
            b = a + rng.uniform(0.5, 2.0)
        else:
            a, b = self.interval
        if self.bounds is None:
            lo = rng.uniform(-1.0, 1.0)
            hi = lo + rng.uniform(0.25, 2.0)
        else:
            lo, hi = self.bounds.gamma, self.bounds.Gamma
        c0 = rng.uniform(-1.0, 1.0)
        sp = hi - lo
        v = rng.uniform(lo - 0.5 * sp, hi + 0.5 * sp, self.k)
        return (a, b, lo, hi, c0, *v)

    def free(self, theta):
        return tuple(range(5, len(theta)))

    def step_scale(self, theta, i):
        return max(theta[3] - theta[2], 1e-3)

    def clip(self, theta):
        lo, hi = theta[2], theta[3]
        sp = hi - lo
        return tuple(theta[:5]) + tuple(min(max(v, lo - sp), hi + sp) for v in theta[5:])

    def build(self, theta):
        theta = tuple(float(v) for v in theta)
        if len(theta) != 5 + self.k:
            raise BadFamilyParameters(f"dprofile theta needs {5 + self.k} entries")
        a, b, lo, hi, c0 = theta[:5]
        if not lo <= hi:
            raise BadFamilyParameters("dprofile needs gamma <= Gamma")
        iv = Interval(a, b)
        k = self.k
        h = iv.width / (k - 1)
        nodes = [a + i * h for i in range(k)]
        nodes[-1] = b
        u = [min(max(v, lo), hi) for v in theta[5:]]
        half_slope = [(u[i + 1] - u[i]) / (2 * h) for i in range(k - 1)]
        G = [c0]
        for i in range(k - 1):
            G.append(G[-1] + h * (u[i] + u[i + 1]) / 2)
        inv_h = 1.0 / h
        last = k - 2

        def seg(t):
            i = int((t - a) * inv_h)
            return 0 if i < 0 else (last if i > last else i)

        def g(t):
            i = seg(t)
            d = t - nodes[i]
            return G[i] + d * (u[i] + d * half_slope[i])

        def dg(t):
            i = seg(t)
            return u[i] + 2 * half_slope[i] * (t - nodes[i])

        kinks = tuple(nodes[1:-1])

        def drange(l, r):
            vals = [dg(l), dg(r)] + [u[i] for i in range(1, k - 1) if l < nodes[i] < r]
            return min(vals), max(vals)

        desc = f"dprofile k={k} on [{a!r}, {b!r}]"
        model = FunctionModel(g, dg, iv, desc, kinks, drange)
        return Member(model, DerivativeBounds(lo, hi, "exact"), kinks, theta, self, self.tag)


@dataclass(frozen=True)
class Union(Family):
    """Concatenation: all members of finite families first, then round-robin."""

    parts: Tuple[Family, ...] = ()
    tag = "all"

    def member(self, seed, index):
        finite = [f for f in self.parts if f.size is not None]
        rest = [f for f in self.parts if f.size is None]
        for f in finite:
            if index < f.size:
                return f.member(seed, index)
            index -= f.size
        if not rest:
            raise BadFamilyParameters("index beyond a finite union")
        f = rest[index % len(rest)]
        return f.member(seed, index // len(rest))

    @property
    def size(self):
        if all(f.size is not None for f in self.parts):
            return sum(f.size for f in self.parts)
        return None


def normalize(member: Member) -> Member:
    """Affine image with ``0 <= g' <= b - a``, the hypothesis of the T cases.

    ``g_n(t) = w * (g(t) - gamma*(t - a)) / (Gamma - gamma)``; affine ``g``
    maps to ``g(t) - gamma*(t - a)`` with bounds ``(0, 0)``.
    """
    m, db = member.model, member.bounds
    iv = m.domain
    a, w, lo, sp = iv.a, iv.width, db.gamma, db.spread
    scale = w / sp if sp > 0 else 1.0
    g0, d0, r0 = m.eval, m.deriv_eval, m.deriv_range

    def g(t):
        return scale * (g0(t) - lo * (t - a))

    def dg(t):
        return scale * (d0(t) - lo)

    drange = None
    if r0 is not None:
        def drange(l, r):
            x, y = r0(l, r)
            return scale * (x - lo), scale * (y - lo)

    model = FunctionModel(g, dg, iv, f"normalized[{m.description}]", m.kinks, drange)
    bounds = DerivativeBounds(0.0, w if sp > 0 else 0.0, db.provenance)
    return replace(member, model=model, bounds=bounds)


FAMILIES = {
    "canonical": lambda: Canonical(),
    "quadratic": lambda: Polynomial(2),
    "polynomial": lambda: Polynomial(4),
    "dprofile": lambda: DProfile(),
    "all": lambda: Union((Canonical(), Polynomial(2), DProfile())),
}


def family_by_name(name: str) -> Family:
    try:
        return FAMILIES[name]()
    except KeyError:
        raise BadFamilyParameters(f"unknown family {name!r}; choose from {sorted(FAMILIES)}") from None
