import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadbound import (
    DerivativeBounds, Interval, LambdaOutOfRange, NotNonincreasing, RangeViolation,
    check_hayashi, hayashi_margins, steffensen_margins,
)
from quadbound.families import DProfile

UNIT = Interval(0.0, 1.0)


def random_pair(rng, A, k=6):
    """A valid Hayashi pair: p nonincreasing piecewise quadratic, 0 <= h <= A piecewise linear."""
    a = rng.uniform(-1, 1)
    iv = Interval(a, a + rng.uniform(0.3, 3))
    p = DProfile(k, iv, DerivativeBounds(-rng.uniform(0.1, 3), 0.0)).member(int(rng.integers(2**31)), 0)
    h = DProfile(k, iv, DerivativeBounds(0.0, A)).member(int(rng.integers(2**31)), 1)
    kinks = sorted(set(p.kinks) | set(h.kinks))
    return p.model, h.model.deriv_eval, iv, kinks


def test_linear_weight_bracket():
    t = hayashi_margins(lambda x: 1 - x, lambda x: x, 1.0, UNIT)
    assert t.lam == pytest.approx(0.5, abs=1e-12)
    assert (t.lower, t.middle, t.upper) == pytest.approx((1 / 8, 1 / 6, 3 / 8), abs=1e-9)


def test_constant_weight_collapses_bracket():
    A = 2.5
    t = hayashi_margins(lambda x: 1.0, lambda x: 1 + np.sin(3 * x), A, Interval(0, 2))
    assert t.lower == pytest.approx(A * t.lam, rel=1e-10)
    assert t.middle == pytest.approx(A * t.lam, rel=1e-10)
    assert t.upper == pytest.approx(A * t.lam, rel=1e-10)


def test_full_window_forces_equality():
    t = hayashi_margins(lambda x: 1 - x, lambda x: 1.0, 1.0, UNIT)
    assert t.lam == 1.0
    assert (t.lower, t.middle, t.upper) == pytest.approx((0.5, 0.5, 0.5), abs=1e-12)


@pytest.mark.parametrize("p, h", [
    (lambda x: 1 - x, lambda x: x),
    (lambda x: 1.0, lambda x: 0.5),
    (lambda x: 1 - x, lambda x: 1.0),
])
def test_check_reports_pass(p, h):
    rep = check_hayashi(p, h, 1.0, UNIT)
    assert rep.passed
    assert min(rep.margins) >= -1e-9


def test_increasing_weight_rejected():
    with pytest.raises(NotNonincreasing) as err:
        hayashi_margins(lambda x: x, lambda x: x, 1.0, UNIT)
    assert 0.0 <= err.value.point <= 1.0


def test_h_out_of_range_rejected():
    with pytest.raises(RangeViolation) as err:
        hayashi_margins(lambda x: 1 - x, lambda x: 2 * x, 1.0, UNIT)
    assert err.value.point > 0.5


def test_bad_amplitude():
    with pytest.raises(ValueError):
        hayashi_margins(lambda x: 1 - x, lambda x: x, 0.0, UNIT)


def test_lambda_out_of_range_type():
    assert issubclass(LambdaOutOfRange, ValueError)


def test_steffensen_is_the_unit_amplitude_case():
    rng = np.random.default_rng(4)
    for _ in range(5):
        p, h, iv, kinks = random_pair(rng, 1.0)
        assert steffensen_margins(p, h, iv, splits=kinks) == hayashi_margins(p, h, 1.0, iv, splits=kinks)


def test_scaling_invariance():
    rng = np.random.default_rng(8)
    for s in (0.1, 3.0, 17.0):
        p, h, iv, kinks = random_pair(rng, 1.0)
        t = hayashi_margins(p, h, 1.0, iv, 1e-13, kinks)
        ts = hayashi_margins(p, lambda x: s * h(x), s, iv, 1e-13 * s, kinks)
        assert ts.lam == pytest.approx(t.lam, rel=1e-12)
        for f in ("lower", "middle", "upper"):
            assert getattr(ts, f) == pytest.approx(s * getattr(t, f), rel=1e-12, abs=1e-14)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), A=st.floats(0.1, 10))
def test_random_pairs_hold(seed, A):
    p, h, iv, kinks = random_pair(np.random.default_rng(seed), A)
    tol = 1e-10
    rep = check_hayashi(p, h, A, iv, tol, kinks)
    assert rep.passed
    assert min(rep.margins) >= -10 * tol
