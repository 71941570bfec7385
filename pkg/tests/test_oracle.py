import math

import pytest

from quadbound import Interval, NoConvergence, integrate, integrate_product
from quadbound.oracle import mean_value

UNIT = Interval(0.0, 1.0)


def test_square_is_exact():
    res = integrate(lambda t: t * t, UNIT, 1e-10, min_depth=0)
    assert res.value == pytest.approx(1 / 3, rel=1e-15)
    # one panel: three points for the whole, two for the halves
    assert res.evaluations == 5


def test_exponential():
    res = integrate(math.exp, UNIT, 1e-10)
    assert res.value == pytest.approx(math.e - 1, abs=1e-10)
    assert res.err_estimate <= 1e-10


def test_kink_at_half():
    res = integrate(lambda t: min(t, 0.5), UNIT, 1e-10)
    assert res.value == pytest.approx(3 / 8, abs=1e-10)


def test_forced_splits_restore_fast_convergence():
    # c - c^2/2 at c = 0.3
    f = lambda t: min(t, 0.3)
    plain = integrate(f, UNIT, 1e-10)
    split = integrate(f, UNIT, 1e-10, splits=[0.3])
    assert plain.value == pytest.approx(0.255, abs=1e-10)
    assert split.value == pytest.approx(0.255, abs=1e-15)
    assert split.evaluations < plain.evaluations


@pytest.mark.parametrize("coeffs", [(1.0,), (0.0, 2.0), (1.0, -3.0, 0.5), (0.2, 0.0, -1.0, 4.0)])
def test_polynomial_exactness(coeffs):
    iv = Interval(-0.7, 2.3)
    f = lambda t: sum(c * t**k for k, c in enumerate(coeffs))
    exact = sum(c * (iv.b ** (k + 1) - iv.a ** (k + 1)) / (k + 1) for k, c in enumerate(coeffs))
    res = integrate(f, iv, 1e-10, min_depth=0)
    assert res.value == pytest.approx(exact, rel=1e-13, abs=1e-15)


def test_product_examples():
    assert integrate_product(lambda t: 1 - t, lambda t: t, UNIT).value == pytest.approx(1 / 6, abs=1e-10)
    assert integrate_product(lambda t: 1.0, lambda t: 1.0, UNIT).value == pytest.approx(1.0, abs=1e-15)
    x = 1.0
    assert integrate_product(lambda t: x - t, lambda t: 2 * t, UNIT).value == pytest.approx(1 / 3, abs=1e-10)


@pytest.mark.parametrize("f, exact, splits", [
    (math.sin, 1 - math.cos(3.0), ()),
    (lambda t: math.exp(t) * math.cos(t), (math.exp(3.0) * (math.cos(3.0) + math.sin(3.0)) - 1) / 2, ()),
    (lambda t: abs(t - 1.1), (1.1**2 + 1.9**2) / 2, (1.1,)),
])
def test_self_consistency_on_tol_halving(f, exact, splits):
    iv = Interval(0.0, 3.0)
    r1 = integrate(f, iv, 1e-8, splits)
    r2 = integrate(f, iv, 5e-9, splits)
    assert abs(r1.value - r2.value) <= max(r1.err_estimate, r2.err_estimate) + 1e-15
    assert r2.value == pytest.approx(exact, abs=1e-8)


def test_additivity():
    f = lambda t: math.exp(-t) * math.cos(4 * t)
    whole = integrate(f, Interval(0, 2), 1e-11)
    left = integrate(f, Interval(0, 0.8), 1e-11)
    right = integrate(f, Interval(0.8, 2), 1e-11)
    combined = whole.err_estimate + left.err_estimate + right.err_estimate
    assert abs(left.value + right.value - whole.value) <= combined + 1e-15


def test_periodic_integrand_needs_min_depth():
    f = lambda t: math.sin(2 * math.pi * t) ** 2
    assert integrate(f, UNIT, 1e-10).value == pytest.approx(0.5, abs=1e-10)


def test_deterministic():
    f = lambda t: math.exp(math.sin(7 * t))
    assert integrate(f, UNIT, 1e-10) == integrate(f, UNIT, 1e-10)


def test_no_convergence_on_singularity():
    with pytest.raises(NoConvergence):
        integrate(lambda t: 1.0 / t if t > 0 else 1e300, UNIT, 1e-10)


def test_bad_tolerance():
    with pytest.raises(ValueError):
        integrate(math.exp, UNIT, 0.0)


def test_mean_value():
    assert mean_value(lambda t: t, Interval(2.0, 4.0)) == pytest.approx(3.0, rel=1e-15)
