"""Acceptance gate: one group of tests per criterion.

A PASS/FAIL line per criterion is printed in the terminal summary (see
conftest.py).
"""

import json
import math
import time

import numpy as np
import pytest

from quadbound import AuditConfig, Case, DerivativeBounds, Interval, audit, evaluate_claim, violation
from quadbound.certquad import certify
from quadbound.cli import EXIT_VIOLATION, main
from quadbound.core import lambda_profile
from quadbound.expr import function_model
from quadbound.families import Canonical, DProfile, Polynomial, family_by_name, sample_family
from quadbound.hayashi import hayashi_margins
from quadbound.oracle import integrate, mean_value

from test_hayashi import random_pair

UNIT = Interval(0.0, 1.0)
EXACT01 = DerivativeBounds(0.0, 1.0, "exact")


def canonical(i):
    m = sample_family(Canonical(), 0, i)
    return m.model, m.kinks


def corpus(n, seed):
    fams = [DProfile(), Polynomial(2), Polynomial(4)]
    return [sample_family(fams[i % 3], seed, i) for i in range(n)]


# 1 ---------------------------------------------------------------------------

@pytest.mark.criterion(1)
def test_c1_hayashi_bracket():
    t0 = time.perf_counter()
    t = hayashi_margins(lambda s: 1 - s, lambda s: s, 1.0, UNIT)
    assert abs(t.lower - 1 / 8) <= 1e-9
    assert abs(t.middle - 1 / 6) <= 1e-9
    assert abs(t.upper - 3 / 8) <= 1e-9
    rng = np.random.default_rng(2024)
    worst = math.inf
    for i in range(500):
        A = float(rng.uniform(0.2, 4.0))
        p, h, iv, kinks = random_pair(rng, A)
        worst = min(worst, *hayashi_margins(p, h, A, iv, 1e-10, kinks).margins)
    assert worst >= -1e-8
    assert time.perf_counter() - t0 < 10.0


# 2 ---------------------------------------------------------------------------

@pytest.mark.criterion(2)
def test_c2_equality_case():
    g = lambda s: s
    for x in np.linspace(0, 1, 11):
        ev = evaluate_claim("C1", g, UNIT, x, EXACT01, mean_value(g, UNIT))
        assert abs(ev.lhs) <= 1e-12
        assert abs(ev.half_width_primary) <= 1e-12


# 3 ---------------------------------------------------------------------------

@pytest.mark.criterion(3)
def test_c3_verified_audits():
    t0 = time.perf_counter()
    cfg = AuditConfig(samples=1000, seed=7, margin=1e-8, threads=1)
    for case in ("C1", "T3", "DW", "GS"):
        rep = audit(case, family_by_name("dprofile"), cfg)
        assert rep.verdict == "no-violation-found", (case, rep.worst_violation_primary)
        assert rep.worst_violation_primary <= 1e-8 and rep.worst_violation_coarse <= 1e-8
    assert time.perf_counter() - t0 < 60.0


# 4 ---------------------------------------------------------------------------

@pytest.mark.criterion(4)
def test_c4_worked_bound():
    g = lambda s: s * s
    ev = evaluate_claim("C1", g, UNIT, 0.5, DerivativeBounds(0.0, 2.0, "exact"), mean_value(g, UNIT))
    assert abs(ev.lhs - 1 / 6) <= 1e-10
    assert ev.half_width_primary == 0.25 and ev.half_width_coarse == 0.25
    assert abs(ev.slack_primary - 1 / 12) <= 1e-10


# 5 ---------------------------------------------------------------------------

def _audit_exit(case, capsys, tmp_path):
    out = tmp_path / f"{case}.json"
    code = main(["audit", "--case", case, "--family", "canonical", "--seed", "0",
                 "--threads", "1", "--out", str(out)])
    capsys.readouterr()
    return code, json.loads(out.read_text())


@pytest.mark.criterion(5)
def test_c5a_point_rule_primary(capsys, tmp_path):
    g, k = canonical(1)
    v = violation("C2", g, UNIT, 0.5, EXACT01, 1e-12, k)
    assert abs(v.primary - 1 / 24) <= 1e-9
    code, rep = _audit_exit("C2", capsys, tmp_path)
    assert code == EXIT_VIOLATION and rep["worst_violation_primary"] >= 1 / 24 - 1e-9


@pytest.mark.criterion(5)
def test_c5b_point_rule_coarse(capsys, tmp_path):
    g, k = canonical(2)
    v = violation("C2", g, UNIT, 0.0, EXACT01, 1e-12, k)
    assert abs(v.evaluation.lhs - 1 / 8) <= 1e-9
    assert v.evaluation.half_width_coarse == 1 / 16 and v.coarse > 0
    code, rep = _audit_exit("C2", capsys, tmp_path)
    assert code == EXIT_VIOLATION and rep["worst_violation_coarse"] >= 1 / 8 - 1 / 16 - 1e-9


@pytest.mark.criterion(5)
def test_c5c_symmetric_rule_coarse(capsys, tmp_path):
    g, k = canonical(1)
    v = violation("C3", g, UNIT, 0.0, EXACT01, 1e-12, k)
    assert abs(v.evaluation.lhs - 1 / 12) <= 1e-9
    assert v.evaluation.half_width_coarse == 1 / 24 and v.coarse > 0
    ref = violation("GS", g, UNIT, 0.0, EXACT01, 1e-12, k)
    assert ref.evaluation.half_width_coarse == 1 / 8 and ref.coarse < 0
    code, rep = _audit_exit("C3", capsys, tmp_path)
    assert code == EXIT_VIOLATION and rep["worst_violation_coarse"] >= 1 / 12 - 1 / 24 - 1e-9


@pytest.mark.criterion(5)
def test_c5d_normalized_symmetric_width_negative(capsys, tmp_path):
    g, k = canonical(1)
    v = violation("T5", g, UNIT, 0.0, EXACT01, 1e-12, k)
    assert v.evaluation.half_width_primary == -1 / 8
    assert v.primary > 0
    code, rep = _audit_exit("T5", capsys, tmp_path)
    assert code == EXIT_VIOLATION


# 6 ---------------------------------------------------------------------------

@pytest.mark.criterion(6)
def test_c6_dominance():
    rng = np.random.default_rng(6)
    for _ in range(10):
        a = rng.uniform(-10, 10)
        w = rng.uniform(0.01, 20)
        lam = np.linspace(0.0, w, 10_000)
        for case, const in (("C1", 8), ("C2", 16), ("C3", 24)):
            gap = w * w / const - lambda_profile(case, lam, w)
            assert gap.min() >= -1e-12 * max(1.0, w * w), (a, w, case)


# 7 ---------------------------------------------------------------------------

@pytest.mark.criterion(7)
def test_c7_certified_exp():
    t0 = time.perf_counter()
    res = certify(function_model("exp(x)", UNIT), UNIT, 1e-6)
    elapsed = time.perf_counter() - t0
    assert abs(res.estimate - (math.e - 1)) <= res.radius <= 1e-6
    assert elapsed < 1.0


@pytest.mark.criterion(7)
def test_c7_certified_corpus():
    bad = []
    for m in corpus(200, seed=71):
        res = certify(m.model, m.interval, 1e-5)
        exact = integrate(m.model, m.interval, 1e-14, m.kinks).value
        if not (res.bound_provenance == "exact" and abs(res.estimate - exact) <= res.radius):
            bad.append(m.theta)
    assert not bad


# 8 ---------------------------------------------------------------------------

@pytest.mark.criterion(8)
def test_c8_affine_invariance():
    for m in corpus(100, seed=8):
        iv = m.interval
        a, w = iv.a, iv.width
        g1 = lambda s, f=m.model: f(a + w * s)
        b1 = DerivativeBounds(w * m.bounds.gamma, w * m.bounds.Gamma, "exact")
        k1 = [(k - a) / w for k in m.kinks]
        mean0 = mean_value(m.model, iv, 1e-13, m.kinks)
        mean1 = mean_value(g1, UNIT, 1e-13, k1)
        for s in (0.0, 0.2, 0.5, 0.9, 1.0):
            e0 = evaluate_claim(Case.C1, m.model, iv, a + w * s, m.bounds, mean0)
            e1 = evaluate_claim(Case.C1, g1, UNIT, s, b1, mean1)
            for f in ("lhs", "half_width_primary", "half_width_coarse", "rule_value"):
                u, v = getattr(e0, f), getattr(e1, f)
                scale = max(abs(u), abs(e0.half_width_coarse), 1e-300)
                assert abs(u - v) <= 1e-10 * scale, (f, u, v)


# 9 ---------------------------------------------------------------------------

@pytest.mark.criterion(9)
def test_c9_determinism(capsys, tmp_path):
    paths = []
    for threads in ("1", "8"):
        path = tmp_path / f"t{threads}.json"
        main(["audit", "--case", "C2", "--family", "all", "--seed", "42", "--samples", "100",
              "--threads", threads, "--out", str(path)])
        paths.append(path.read_bytes())
    capsys.readouterr()
    assert paths[0] == paths[1]
