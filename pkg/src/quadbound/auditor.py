"""Counterexample search for the inequality cases.

An audit scans sampled family members over a grid of admissible points,
hill-climbs from the most promising candidates, and re-verifies the best
one with the oracle at a hundredfold tighter tolerance.  A violation is
only reported if it survives re-verification with margin.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .core import BoundEvaluation, Case, Interval, as_case, admissible, evaluate_claim
from .families import Canonical, DProfile, Family, Member, Union, normalize, sample_family
from .oracle import mean_value

VERDICTS = ("no-violation-found", "violated-primary", "violated-coarse",
            "violated-both", "negative-bound-observed")


class Violation(NamedTuple):
    primary: float
    coarse: float
    evaluation: BoundEvaluation


def violation(case, g, iv: Interval, x: float, db, tol: float = 1e-12, splits=()) -> Violation:
    """``lhs - half_width`` for both widths; positive means the claim fails.

    The mean value of ``g`` is computed with the oracle at ``tol``.
    """
    if splits == () and getattr(g, "kinks", None):
        splits = g.kinks
    ev = evaluate_claim(case, g, iv, x, db, mean_value(g, iv, tol, splits))
    return Violation(ev.lhs - ev.half_width_primary, ev.lhs - ev.half_width_coarse, ev)


@dataclass(frozen=True)
class AuditConfig:
    samples: int = 100
    seed: int = 0
    x_grid: int = 65
    steps: int = 200
    top: int = 5
    tol: float = 1e-10
    margin: float = 1e-8
    threads: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.x_grid < 2:
            raise ValueError("x_grid must be >= 2")

    @property
    def verify_tol(self):
        return self.tol / 100

    @property
    def threshold(self):
        return max(self.margin, 10 * self.verify_tol)


@dataclass(frozen=True)
class Witness:
    family: str
    theta: tuple
    x: float
    lhs: float
    width_primary: float
    width_coarse: float
    violation_primary: float
    violation_coarse: float
    description: str = ""

    def as_dict(self):
        return {
            "family": self.family,
            "theta": list(self.theta),
            "x": self.x,
            "lhs": self.lhs,
            "width_primary": self.width_primary,
            "width_coarse": self.width_coarse,
        }


@dataclass(frozen=True)
class AuditReport:
    case: Case
    family: str
    samples: int
    seed: int
    worst_violation_primary: float
    worst_violation_coarse: float
    witness: Witness
    witness_coarse: Witness
    verdict: str
    negative_bound_seen: bool = False
    config: AuditConfig = field(default_factory=AuditConfig, repr=False)

    @property
    def status(self):
        return self.case.status

    @property
    def violated(self) -> bool:
        return self.verdict != "no-violation-found"

    def as_dict(self):
        return {
            "case": self.case.value,
            "status": self.status.value,
            "family": self.family,
            "samples": self.samples,
            "seed": self.seed,
            "worst_violation_primary": self.worst_violation_primary,
            "worst_violation_coarse": self.worst_violation_coarse,
            "witness": self.witness.as_dict(),
            "witness_coarse": self.witness_coarse.as_dict(),
            "verdict": self.verdict,
        }

    def to_json(self) -> str:
        return dumps(self.as_dict())

    def to_csv(self) -> str:
        return report_csv([self])


CSV_COLUMNS = (
    "case", "status", "family", "samples", "seed", "worst_violation_primary",
    "worst_violation_coarse", "witness_family", "witness_theta", "witness_x",
    "witness_lhs", "witness_width_primary", "witness_width_coarse", "verdict",
)


def fmt(v) -> str:
    """17 significant digits; the form used for every float we serialize."""
    if v is None or (isinstance(v, float) and not math.isfinite(v)):
        return "null"
    return format(float(v), ".17g")


def dumps(obj) -> str:
    """Compact JSON with floats at 17 significant digits."""
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (float, np.floating)):
        return fmt(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    return json.dumps(str(obj))


def report_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        w = r.witness
        writer.writerow([
            r.case.value, r.status.value, r.family, r.samples, r.seed,
            fmt(r.worst_violation_primary), fmt(r.worst_violation_coarse), w.family,
            ";".join(fmt(t) for t in w.theta), fmt(w.x), fmt(w.lhs),
            fmt(w.width_primary), fmt(w.width_coarse), r.verdict,
        ])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# search


class _Probe:
    """Evaluates one member of one case, caching the oracle mean."""

    def __init__(self, case: Case, member: Member, tol: float):
        self.case = case
        self.member = normalize(member) if case.normalized else member
        self.tol = tol
        self.iv = self.member.interval
        self._mean = None

    @property
    def mean(self):
        if self._mean is None:
            m = self.member
            self._mean = mean_value(m.model, self.iv, self.tol, m.kinks)
        return self._mean

    def evaluate(self, x) -> BoundEvaluation:
        m = self.member
        return evaluate_claim(self.case, m.model, self.iv, x, m.bounds, self.mean)


class _Cand(NamedTuple):
    score: float
    x: float
    theta: tuple
    index: int


def _objective(ev: BoundEvaluation, which: str) -> float:
    width = ev.half_width_primary if which == "primary" else ev.half_width_coarse
    return ev.lhs - width


def _scan(args):
    case, family, seed, index, cfg = args
    member = sample_family(family, seed, index)
    probe = _Probe(case, member, cfg.tol)
    lo, hi = admissible(case, probe.iv)
    best = {}
    negative = False
    for x in np.linspace(lo, hi, cfg.x_grid):
        ev = probe.evaluate(float(x))
        negative |= ev.half_width_primary < 0
        for which in ("primary", "coarse"):
            s = _objective(ev, which)
            if which not in best or s > best[which][0]:
                best[which] = (s, float(x))
    return {which: _Cand(s, x, member.theta, index) for which, (s, x) in best.items()}, negative


def _rank_key(c: _Cand):
    return (-c.score, c.x, c.theta)


def _climb(args):
    """Coordinate-wise hill climb on (free theta, x) from one candidate."""
    case, family, seed, cand, which, cfg = args
    base = sample_family(family, seed, cand.index)
    source = base.source
    theta = list(cand.theta)
    free = source.free(theta)
    cache = {}

    def probe_for(th):
        key = tuple(th)
        if key not in cache:
            cache[key] = _Probe(case, source.build(key), cfg.tol)
        return cache[key]

    def score(th, x):
        try:
            return _objective(probe_for(th).evaluate(x), which)
        except (ValueError, ArithmeticError):
            return -math.inf

    lo, hi = admissible(case, probe_for(theta).iv)
    x = cand.x
    current = score(theta, x)
    step = 0.125
    for _ in range(cfg.steps):
        moves = []
        for i in free:
            d = step * source.step_scale(theta, i)
            for sgn in (1.0, -1.0):
                th = list(theta)
                th[i] += sgn * d
                th = list(source.clip(th))
                if th != theta:
                    moves.append((th, x))
        for sgn in (1.0, -1.0):
            nx = min(max(x + sgn * step * (hi - lo), lo), hi)
            if nx != x:
                moves.append((theta, nx))
        best_move, best_score = None, current
        for th, nx in moves:
            s = score(th, nx)
            if s > best_score or (s == best_score and best_move is not None
                                  and (nx, tuple(th)) < (best_move[1], tuple(best_move[0]))):
                best_move, best_score = (th, nx), s
        if best_move is None:
            step /= 2
            if step < 1e-10:
                break
            continue
        theta, x = list(best_move[0]), best_move[1]
        current = best_score
        if len(cache) > 64:
            keep = tuple(theta)
            cache = {keep: cache[keep]}
    return _Cand(current, x, tuple(theta), cand.index)


def _verify(case, family, seed, cand: _Cand, cfg) -> tuple:
    base = sample_family(family, seed, cand.index)
    member = base.source.build(cand.theta)
    probe = _Probe(case, member, cfg.verify_tol)
    ev = probe.evaluate(cand.x)
    vp = ev.lhs - ev.half_width_primary
    vc = ev.lhs - ev.half_width_coarse
    w = Witness(member.tag or family.tag, tuple(cand.theta), cand.x, ev.lhs,
                ev.half_width_primary, ev.half_width_coarse, vp, vc,
                probe.member.model.description)
    return w, ev


def _map(fn, items, threads):
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * threads))))


def audit(case, family: Family, config: Optional[AuditConfig] = None, **overrides) -> AuditReport:
    """Search ``family`` for instances where ``case`` fails.

    The result depends only on ``(case, family, config)``; the worker count
    never changes it.
    """
    case = as_case(case)
    cfg = config or AuditConfig()
    if overrides:
        cfg = AuditConfig(**{**cfg.__dict__, **overrides})
    n = cfg.samples if family.size is None else min(cfg.samples, family.size)

    scans = _map(_scan, [(case, family, cfg.seed, i, cfg) for i in range(n)], cfg.threads)
    negative = any(neg for _, neg in scans)

    starts = []
    for which in ("primary", "coarse"):
        ranked = sorted((s[which] for s, _ in scans), key=_rank_key)
        starts += [(case, family, cfg.seed, c, which, cfg) for c in ranked[: cfg.top]]
    climbed = _map(_climb, starts, cfg.threads)

    witnesses = {}
    for which in ("primary", "coarse"):
        picked = [c for c, s in zip(climbed, starts) if s[4] == which]
        best = sorted(picked, key=_rank_key)[0]
        witnesses[which] = _verify(case, family, cfg.seed, best, cfg)[0]

    wp = witnesses["primary"].violation_primary
    wc = witnesses["coarse"].violation_coarse
    thr = cfg.threshold
    negative |= witnesses["primary"].width_primary < 0
    if wp > thr and wc > thr:
        verdict = "violated-both"
    elif wp > thr:
        verdict = "violated-primary"
    elif wc > thr:
        verdict = "violated-coarse"
    elif negative:
        verdict = "negative-bound-observed"
    else:
        verdict = "no-violation-found"
    return AuditReport(case, family.tag, n, cfg.seed, wp, wc, witnesses["primary"],
                       witnesses["coarse"], verdict, negative, cfg)


# ---------------------------------------------------------------------------
# sharpness of the coarse constants

SHARPNESS_COLUMNS = ("case", "status", "constant", "scale", "coarse_bound",
                     "observed_max_lhs", "ratio", "witness_family", "witness_x", "witness")


class SharpnessRow(NamedTuple):
    case: Case
    constant: float
    scale: float
    coarse_bound: float
    observed_max_lhs: float
    witness: Witness

    @property
    def ratio(self):
        return self.observed_max_lhs / self.coarse_bound if self.coarse_bound else math.nan


def sharpness_table(cases, iv: Interval, gamma: float = 0.0, Gamma: float = 1.0,
                    config: Optional[AuditConfig] = None) -> list:
    """Largest observed deviation per case against its coarse bound.

    The corpus is the canonical trio mapped onto ``iv`` with bounds
    ``(gamma, Gamma)`` plus derivative-profile members sharing those bounds.
    """
    from .core import DerivativeBounds

    db = DerivativeBounds(gamma, Gamma, "exact")
    corpus = Union((Canonical(iv, db), DProfile(interval=iv, bounds=db)))
    cfg = config or AuditConfig(samples=200, seed=0)
    rows = []
    for case in map(as_case, cases):
        rep = audit(case, corpus, cfg)
        w = rep.witness_coarse
        spread = iv.width if case.normalized else Gamma - gamma
        scale = spread * iv.width
        rows.append(SharpnessRow(case, case.coarse_constant, scale,
                                 case.coarse_constant * scale, w.lhs, w))
    return rows


def sharpness_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SHARPNESS_COLUMNS)
    for r in rows:
        writer.writerow([r.case.value, r.case.status.value, fmt(r.constant), fmt(r.scale),
                         fmt(r.coarse_bound), fmt(r.observed_max_lhs), fmt(r.ratio),
                         r.witness.family, fmt(r.witness.x), r.witness.description])
    return buf.getvalue()
