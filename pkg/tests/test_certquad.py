import math
import time
import warnings

import pytest

from quadbound import BudgetExhausted, Interval
from quadbound.certquad import CertifyConfig, certify, panel_bound
from quadbound.core import DerivativeBounds
from quadbound.expr import function_model
from quadbound.families import DProfile, Polynomial, sample_family
from quadbound.oracle import integrate

UNIT = Interval(0.0, 1.0)


def corpus(n=200, seed=17):
    fams = [DProfile(), Polynomial(2), Polynomial(4), DProfile(k=3)]
    return [sample_family(fams[i % len(fams)], seed, i) for i in range(n)]


def test_affine_is_exact():
    res = certify(function_model("x", UNIT), UNIT, 1e-12)
    assert res.estimate == 0.5 and res.radius == 0.0 and res.subintervals == 1


def test_exp():
    t0 = time.perf_counter()
    res = certify(function_model("exp(x)", UNIT), UNIT, 1e-6)
    assert time.perf_counter() - t0 < 1.0
    assert abs(res.estimate - (math.e - 1)) <= res.radius <= 1e-6
    assert res.converged and res.bound_provenance == "sampled-inflated"


def test_square_single_interval():
    bound = panel_bound(0.0, 1.0, UNIT, DerivativeBounds(0.0, 2.0, "exact"))
    assert bound == 0.25
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BudgetExhausted)
        res = certify(function_model("x^2", UNIT), UNIT, 1e-9, CertifyConfig(max_subintervals=1))
    assert res.subintervals == 1 and res.radius == pytest.approx(0.25, abs=1e-12)
    assert abs(res.estimate - 1 / 3) == pytest.approx(1 / 6, abs=1e-15)


def test_budget_exhaustion_is_flagged():
    with pytest.warns(BudgetExhausted):
        res = certify(function_model("exp(x)", UNIT), UNIT, 1e-12, CertifyConfig(max_subintervals=8))
    assert not res.converged and res.radius > 1e-12 and res.subintervals == 8
    # the best-so-far answer is still a valid enclosure
    assert abs(res.estimate - (math.e - 1)) <= res.radius


def test_rejects_bad_tol():
    with pytest.raises(ValueError):
        certify(function_model("x", UNIT), UNIT, 0.0)


@pytest.mark.parametrize("chunk", range(4))
def test_corpus_soundness(chunk):
    members = corpus()[chunk * 50:(chunk + 1) * 50]
    for m in members:
        res = certify(m.model, m.interval, 1e-5)
        assert res.bound_provenance == "exact" and res.converged
        exact = integrate(m.model, m.interval, 1e-14, m.kinks).value
        assert abs(res.estimate - exact) <= res.radius + 1e-13, m.theta


def test_radius_history_monotone():
    for text in ("exp(x)", "sin(3*x)", "abs(x-0.3)", "sqrt(x+0.01)"):
        res = certify(function_model(text, UNIT), UNIT, 1e-5)
        h = res.history
        assert all(b <= a * (1 + 1e-12) + 1e-18 for a, b in zip(h, h[1:])), text


def test_deterministic():
    g = function_model("atan(5*x) + x^3", Interval(-1.0, 2.0))
    r1 = certify(g, tol=1e-6)
    r2 = certify(function_model("atan(5*x) + x^3", Interval(-1.0, 2.0)), tol=1e-6)
    assert (r1.estimate, r1.radius, r1.subintervals, r1.history) == (
        r2.estimate, r2.radius, r2.subintervals, r2.history)
