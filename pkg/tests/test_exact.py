import math

import numpy as np
import pytest
from scipy import integrate

from capinradius.core import AnnulusGeometry, Exponents, Status
from capinradius.exact import (cap_ball, cap_ball_value, cap_point, cap_scaling_check, gamma0,
                               grotzsch_gap, isocap_lower_bound, log_grotzsch_gap, p_modulus,
                               sphere_area, unit_ball_volume, unit_ball_volume_recursive)


def quad_capacity(N, p, r, R):
    """cap = (int_r^R (|S| rho^{N-1})^{-1/(p-1)} drho)^{1-p} by adaptive quadrature."""
    s = N * unit_ball_volume(N)
    val, _ = integrate.quad(lambda t: (s * t ** (N - 1)) ** (-1.0 / (p - 1.0)), r, R,
                            epsrel=1e-13, limit=200)
    return val ** (1.0 - p)


def test_unit_ball_volume_two_ways():
    for N in range(1, 12):
        assert unit_ball_volume(N) == pytest.approx(unit_ball_volume_recursive(N), rel=1e-14)
    assert unit_ball_volume(2) == pytest.approx(math.pi)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3)


@pytest.mark.parametrize("N,p", [(2, 1.5), (3, 2.0), (3, 3.0), (4, 2.5), (2, 2.0), (2, 4.0),
                                 (3, 1.2), (3, 2.999)])
def test_closed_form_against_quadrature(N, p):
    for r, R in ((0.3, 1.0), (1.0, 2.0), (2.5, 7.0)):
        assert cap_ball_value(N, p, r, R) == pytest.approx(quad_capacity(N, p, r, R), rel=1e-9)


@pytest.mark.parametrize("p", [1.01, 1.0001])
def test_near_p_one_against_log_antiderivative(p):
    # int_r^R t^{-(N-1)/(p-1)} dt = (R^k - r^k)/k with k = 1 - (N-1)/(p-1) < 0,
    # evaluated through logarithms; quadrature cannot resolve the peak at t = r
    N = 3
    s = N * unit_ball_volume(N)
    e = 1.0 / (p - 1.0)
    k = 1.0 - (N - 1) * e
    for r, R in ((0.3, 1.0), (1.0, 2.0), (2.5, 7.0)):
        log_I = -e * math.log(s) + k * math.log(r) + math.log(-math.expm1(k * math.log(R / r))) \
            - math.log(-k)
        assert cap_ball_value(N, p, r, R) == pytest.approx(math.exp((1.0 - p) * log_I), rel=1e-12)


def test_p_equal_one_is_perimeter():
    assert cap_ball_value(3, 1.0, 2.0, 5.0) == pytest.approx(sphere_area(3, 2.0))


def test_continuity_across_conformal_exponent():
    below = cap_ball_value(3, 3.0 - 1e-7, 1.0, 2.0)
    at = cap_ball_value(3, 3.0, 1.0, 2.0)
    above = cap_ball_value(3, 3.0 + 1e-7, 1.0, 2.0)
    assert below == pytest.approx(at, rel=1e-5)
    assert above == pytest.approx(at, rel=1e-5)


def test_scaling_law():
    for N, p in ((2, 1.5), (3, 2.0), (4, 4.0), (2, 3.0)):
        assert cap_scaling_check(Exponents(N, p), 0.7, 3.1) < 1e-13


def test_capacity_increases_with_r_and_decreases_with_R():
    a = cap_ball_value(3, 2.0, 1.0, 3.0)
    assert cap_ball_value(3, 2.0, 1.5, 3.0) > a > cap_ball_value(3, 2.0, 1.0, 4.0)


def test_cap_point_regimes():
    c = cap_point(Exponents(3, 2.0), 1.0)
    assert c.value == 0.0 and c.status is Status.CAPACITY_NULL
    assert cap_point(Exponents(3, 3.0), 1.0).value == 0.0
    # point capacity is the r -> 0 limit of the ball capacity when p > N
    exp = Exponents(2, 3.0)
    assert cap_point(exp, 1.0).value == pytest.approx(cap_ball_value(2, 3.0, 1e-9, 1.0), rel=1e-4)


def test_gamma0_two_routes():
    for N, p in ((2, 4.0), (3, 5.0), (2, 2.5), (4, 7.3)):
        exp = Exponents(N, p)
        ratio = cap_point(exp, 2.0).value / cap_ball_value(N, p, 1.0, 2.0)
        assert gamma0(exp) == pytest.approx(ratio, rel=1e-12)
        assert 0 < gamma0(exp) < 1
    with pytest.raises(ValueError):
        gamma0(Exponents(3, 2.0))


def test_grotzsch_log_and_plain_agree():
    exp = Exponents(3, 2.0)
    lhs, rhs = grotzsch_gap(exp, 0.5, 1.0, 2.0)
    llhs, lrhs = log_grotzsch_gap(exp, 0.5, 1.0, 2.0)
    assert math.log(lhs) == pytest.approx(llhs) and math.log(rhs) == pytest.approx(lrhs)
    assert lhs <= rhs


def test_grotzsch_near_p_one_stays_finite():
    llhs, lrhs = log_grotzsch_gap(Exponents(3, 1.0001), 0.5, 1.0, 2.0)
    assert math.isfinite(llhs) and llhs <= lrhs + 1e-12 * abs(lrhs)


def test_p_modulus():
    assert p_modulus(0.0, 2.0).value == math.inf
    assert p_modulus(4.0, 3.0).value == pytest.approx(0.5)


@pytest.mark.parametrize("N,p", [(3, 2.0), (3, 3.0), (2, 3.0), (3, 1.0)])
def test_isocap_bound_is_exact_for_balls(N, p):
    w = unit_ball_volume(N)
    r, R = 0.6, 1.7
    got = isocap_lower_bound(Exponents(N, p), w * r ** N, w * R ** N)
    assert got == pytest.approx(cap_ball_value(N, p, r, R), rel=1e-12)


def test_bad_geometry_rejected():
    with pytest.raises(ValueError):
        cap_ball_value(3, 2.0, 2.0, 1.0)
    with pytest.raises(ValueError):
        AnnulusGeometry(0.0, 1.0)
    assert cap_ball(Exponents(2, 2.0), AnnulusGeometry(1.0, np.e)).value == pytest.approx(2 * math.pi)
