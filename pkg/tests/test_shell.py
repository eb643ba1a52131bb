import math

import numpy as np
import pytest

from capinradius.core import Exponents
from capinradius.radial import shell_rayleigh_max
from capinradius.shell import (cheeger_ball_scan, cheeger_shell_constant, handy_shell_bound,
                               normalized_sharp_constant, rough_shell_bound,
                               sharp_shell_constant, shell_constant_p1, shell_energy_closed_form,
                               shell_profile, smoothed_indicator_ratio)
from capinradius.suites import random_exponents, random_shell, shell_order_suite


def test_sharp_constant_is_reciprocal_energy_power():
    exp = Exponents(3, 2.0)
    E = shell_energy_closed_form(exp, 0.5, 1.0, 2.0)
    assert sharp_shell_constant(exp, 0.5, 1.0, 2.0) == pytest.approx(E ** (exp.p - 1), rel=1e-10)


def test_rayleigh_max_reaches_sharp_constant():
    exp = Exponents(2, 1.5)
    log_max, _ = shell_rayleigh_max(exp, 1.0, 2.0, 5.0)
    ratio = math.exp(log_max) / sharp_shell_constant(exp, 1.0, 2.0, 5.0)
    assert 0.999 <= ratio <= 1.0 + 1e-9


def test_constant_chain_on_random_shells():
    res = shell_order_suite(np.random.default_rng(11), 100)
    assert res.ok, res


def test_chain_order_explicit():
    exp = Exponents(4, 2.5)
    a = normalized_sharp_constant(exp, 1.0, 3.0, 8.0)
    b = handy_shell_bound(exp, 1.0, 3.0, 8.0)
    c = rough_shell_bound(exp, 1.0, 8.0)
    assert a <= b <= c


def test_p_one_constants():
    # perimeter / (shell mass inside B_t) is minimized by t = r2 among concentric balls
    k = shell_constant_p1(3, 1.0, 2.0, 4.0)
    h = cheeger_shell_constant(3, 1.0, 2.0, 4.0)
    assert k * h == pytest.approx(1.0)
    assert h == pytest.approx(4.0 * math.pi * 4.0 / (4.0 * math.pi / 3.0 * 7.0))
    t_star, best = cheeger_ball_scan(3, 1.0, 2.0, 4.0)
    assert t_star == pytest.approx(2.0, abs=1e-3)
    assert best == pytest.approx(h, rel=1e-6)


def test_smoothed_indicators_approach_sharp_p_one_constant():
    k = shell_constant_p1(2, 1.0, 2.0, 3.0)
    vals = [smoothed_indicator_ratio(2, 1.0, 2.0, 3.0, d) for d in (1e-1, 1e-2, 1e-3)]
    assert all(v <= k * (1 + 1e-9) for v in vals)
    assert abs(vals[-1] - k) < abs(vals[1] - k) < abs(vals[0] - k)
    assert vals[-1] == pytest.approx(k, rel=1e-3)


def test_profile_is_monotone_and_vanishes_at_boundary():
    prof = shell_profile(Exponents(3, 2.0), 0.5, 1.0, 2.0)
    rho = np.linspace(0.0, 2.0, 401)
    v = prof(rho)
    assert np.all(np.diff(v) <= 1e-14)
    assert v[-1] == pytest.approx(0.0, abs=1e-14)


def test_shell_energy_positive_on_random_tuples():
    rng = np.random.default_rng(5)
    for _ in range(50):
        exp = random_exponents(rng)
        r1, r2, R = random_shell(rng)
        assert shell_energy_closed_form(exp, r1, r2, R) > 0
