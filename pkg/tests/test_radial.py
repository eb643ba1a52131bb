import math

import numpy as np
import pytest

from capinradius.core import AnnulusGeometry, Exponents
from capinradius.exact import cap_ball_value
from capinradius.mesh import graded_unit, log_graded, uniform
from capinradius.radial import (radial_capacity, radial_lambda_p_ball, rayleigh_radial,
                                shell_potential_numeric)
from capinradius.shell import shell_energy_closed_form
from capinradius.shooting import bessel_check, first_zero, lambda_ball_shooting


def test_meshes_are_increasing_and_hit_endpoints():
    for m in (uniform(0.0, 2.0, 64), log_graded(0.1, 5.0, 200, 3.0), graded_unit(100, 4.0)):
        assert np.all(np.diff(m) > 0)
    m = log_graded(0.1, 5.0, 200, 3.0)
    assert m[0] == pytest.approx(0.1) and m[-1] == pytest.approx(5.0)


@pytest.mark.parametrize("N,p,r,R", [(3, 2.0, 1.0, 2.0), (2, 2.0, 0.01, 1.0), (4, 1.3, 0.5, 9.0),
                                     (3, 3.0, 0.2, 5.0), (2, 1.9, 3.0, 3.1)])
def test_radial_capacity_converges(N, p, r, R):
    ref = cap_ball_value(N, p, r, R)
    num, grid, rep = radial_capacity(Exponents(N, p), AnnulusGeometry(r, R), 4096)
    assert num.value == pytest.approx(ref, rel=1e-5)
    # the discrete capacity is an upper bound (conforming minimization)
    assert num.value >= ref * (1 - 1e-12)


def test_radial_error_decreases_with_refinement():
    exp, geom = Exponents(3, 1.5), AnnulusGeometry(0.3, 4.0)
    ref = cap_ball_value(3, 1.5, 0.3, 4.0)
    errs = [abs(radial_capacity(exp, geom, n)[0].value - ref) for n in (256, 1024, 4096)]
    assert errs[0] > errs[1] > errs[2]


def test_shell_energy_numeric():
    exp = Exponents(3, 2.0)
    ref = shell_energy_closed_form(exp, 0.5, 1.0, 2.0)
    assert shell_potential_numeric(exp, 0.5, 1.0, 2.0).energy == pytest.approx(ref, rel=1e-6)


def test_shooting_matches_bessel_zeros():
    for N in (2, 3, 4):
        gap, _ = bessel_check(N)
        assert gap < 1e-9
    assert first_zero(1, 2.0) == pytest.approx(math.pi / 2, rel=1e-10)


def test_rayleigh_radial_ball_and_interval():
    val, grid, rep = rayleigh_radial(2, 2.0, 2.0, 1.0, 4096)
    assert val == pytest.approx(lambda_ball_shooting(2, 2.0), rel=1e-5)
    assert rep.converged
    val1, _, _ = rayleigh_radial(1, 3.0, 3.0, 1.0, 4096)
    assert val1 == pytest.approx(lambda_ball_shooting(1, 3.0), rel=1e-4)


def test_lambda_p1_is_cheeger_of_ball():
    assert radial_lambda_p_ball(Exponents(3, 1.0)) == pytest.approx(3.0)
