import math

import pytest

from capinradius.core import Exponents
from capinradius.exact import cap_ball_value, gamma0
from capinradius.geometry import ball_outside_slab, cap_volume, intersection_volume, phi_N
from capinradius.inradius import (DomainSpec, InradiusBracket, Verdict, capacitary_inradius,
                                  negligibility_test, perforated_gamma_zero_inradius,
                                  perforated_lambda_bound, slab_cap_upper, slab_degeneration,
                                  slab_lower_ratio, slab_target, slab_threshold)


def test_cap_volume_against_elementary_formula():
    # 3D spherical cap of height h: pi h^2 (3r - h) / 3
    for r, h in ((1.0, 0.3), (2.0, 1.0), (1.5, 2.0)):
        assert cap_volume(3, r, h) == pytest.approx(math.pi * h * h * (3 * r - h) / 3, rel=1e-13)


def test_intersection_and_slab_volumes():
    assert intersection_volume(3, 1.0, 1.0, 0.0) == pytest.approx(4 * math.pi / 3)
    assert intersection_volume(2, 1.0, 1.0, 3.0) == 0.0
    assert ball_outside_slab(3, 2.0, 0.0) == pytest.approx(2 * math.pi * (6 - 1) / 3)


def test_phi_curve_starts_at_zero_and_increases():
    assert phi_N(3, 1.0) == pytest.approx(0.0, abs=1e-15)
    vals = [phi_N(3, r) for r in (1.1, 1.5, 2.0, 4.0, 10.0)]
    assert all(b > a for a, b in zip(vals, vals[1:])) and vals[-1] < 1


def test_slab_threshold_root():
    exp = Exponents(3, 2.0)
    for g in (0.1, 0.5, 0.9):
        r = slab_threshold(exp, g)
        assert phi_N(3, r) == pytest.approx(slab_target(exp, g), abs=1e-12)
    assert slab_threshold(exp, 0.1) < slab_threshold(exp, 0.5) < slab_threshold(exp, 0.9)


def test_slab_ratio_bounds_are_ordered():
    exp = Exponents(3, 2.0)
    for r in (1.2, 2.0, 8.0):
        full = cap_ball_value(3, 2.0, r, 2 * r)
        assert 0 < slab_lower_ratio(exp, r) <= slab_cap_upper(exp, r) / full <= 1.0


def test_slab_verdicts():
    exp, dom = Exponents(3, 2.0), DomainSpec.slab(3, 1.0)
    assert negligibility_test(dom, 0.0, 0.9, exp, 0.5).verdict is Verdict.NEGLIGIBLE
    v = negligibility_test(dom, 0.0, 5.0, exp, 0.5)
    assert v.verdict is Verdict.NOT_NEGLIGIBLE and v.negligible is False
    assert v.cap_lo <= v.cap_hi


def test_slab_bracket_is_consistent():
    exp = Exponents(3, 2.0)
    br = capacitary_inradius(DomainSpec.slab(3, 1.0), exp, 0.5)
    assert 1.0 <= br.lo <= br.hi <= slab_threshold(exp, 0.5) + 1e-12
    wide = capacitary_inradius(DomainSpec.slab(3, 2.0), exp, 0.5)
    assert wide.lo == pytest.approx(2 * br.lo, rel=1e-3)
    assert wide.hi == pytest.approx(2 * br.hi, rel=1e-3)


def test_bracket_grows_with_gamma():
    exp, dom = Exponents(3, 2.0), DomainSpec.slab(3, 1.0)
    a = capacitary_inradius(dom, exp, 0.2)
    b = capacitary_inradius(dom, exp, 0.8)
    assert a.lo <= b.lo and a.hi <= b.hi


def test_punctured_ball_superconformal():
    exp = Exponents(2, 4.0)
    dom = DomainSpec.punctured_ball(2, 2.0)
    below = capacitary_inradius(dom, exp, 0.5 * gamma0(exp))
    assert below.lo <= 1.0 <= below.hi and below.width <= 2e-3
    above = capacitary_inradius(dom, exp, min(0.99, 2 * gamma0(exp)))
    assert above.lo >= 2.0 * (1 - 1e-3)


def test_punctured_ball_subconformal_point_is_null():
    exp = Exponents(3, 2.0)
    dom = DomainSpec.punctured_ball(3, 1.0)
    assert negligibility_test(dom, [0.0, 0.0, 0.0], 0.9, exp, 0.1).verdict is Verdict.NEGLIGIBLE


def test_lattice_bracket_lower_end():
    exp = Exponents(2, 2.0)
    br = capacitary_inradius(DomainSpec.perforated_lattice(2, 0.1), exp, 0.3)
    assert br.lo >= 0.5 * math.sqrt(2) - 0.1 - 1e-9


def test_lattice_helpers():
    assert perforated_gamma_zero_inradius(3, 0.1) == pytest.approx(math.sqrt(3) / 2)
    exp = Exponents(2, 2.0)
    assert perforated_lambda_bound(exp, 0.01) < perforated_lambda_bound(exp, 0.1)
    with pytest.raises(ValueError):
        perforated_lambda_bound(exp, 0.3)


def test_obstacle_complement_is_unbounded():
    dom = DomainSpec.obstacle_complement([(0.0, 0.0, 0.5)])
    br = capacitary_inradius(dom, Exponents(2, 3.0), 0.5)
    assert math.isinf(br.lo) and math.isinf(br.hi)


def test_degeneration_sequence():
    exp = Exponents(3, 2.0)
    pts = [slab_degeneration(exp, 2.0 ** k) for k in range(1, 7)]
    lo = [d.gamma_lo for d in pts]
    assert all(b > a for a, b in zip(lo, lo[1:]))
    assert all(d.gamma_lo <= d.gamma_hi <= 1.0 for d in pts)


def test_bracket_validation_and_dimension_mismatch():
    with pytest.raises(ValueError):
        InradiusBracket(2.0, 1.0, 0.5, "x")
    with pytest.raises(ValueError):
        capacitary_inradius(DomainSpec.slab(3, 1.0), Exponents(2, 1.5), 0.5)
