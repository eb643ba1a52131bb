"""Volumes of spherical caps, lenses and the slab complement of a ball."""

from __future__ import annotations

import math

from scipy import integrate
from scipy.special import betainc

from .exact import unit_ball_volume


def cap_volume(N: int, r: float, h: float) -> float:
    """Volume of the cap of height ``h`` cut from a ball of radius ``r`` in R^N."""
    if h <= 0:
        return 0.0
    if h >= 2 * r:
        return unit_ball_volume(N) * r ** N
    if h > r:
        return unit_ball_volume(N) * r ** N - cap_volume(N, r, 2 * r - h)
    x = (2 * r * h - h * h) / (r * r)
    return 0.5 * unit_ball_volume(N) * r ** N * float(betainc((N + 1) / 2.0, 0.5, x))


def intersection_volume(N: int, r1: float, r2: float, d: float) -> float:
    """``|B_{r1}(x) cap B_{r2}(y)|`` for centers at distance ``d``."""
    if d >= r1 + r2:
        return 0.0
    if d <= abs(r1 - r2):
        return unit_ball_volume(N) * min(r1, r2) ** N
    h1 = r1 - (d * d + r1 * r1 - r2 * r2) / (2 * d)
    h2 = r2 - (d * d + r2 * r2 - r1 * r1) / (2 * d)
    return cap_volume(N, r1, h1) + cap_volume(N, r2, h2)


def ball_minus_ball(N: int, r: float, R: float, d: float) -> float:
    """``|B_r(x0) minus B_R(0)|`` with ``|x0| = d``."""
    return unit_ball_volume(N) * r ** N - intersection_volume(N, r, R, d)


def ball_outside_slab(N: int, r: float, t: float, w: float = 1.0) -> float:
    """Volume of ``B_r(t e_N)`` outside the slab ``|x_N| < w``."""
    return cap_volume(N, r, t + r - w) + cap_volume(N, r, r - t - w)


def phi_small(N: int, r: float) -> float:
    """``2 omega_{N-1} int_{arcsin(1/r)}^{pi/2} cos^N t dt``, so ``|B_r minus slab| = r^N phi``."""
    if r < 1:
        raise ValueError("phi_N is defined for r >= 1")
    if r == 1:
        return 0.0
    val, _ = integrate.quad(lambda t: math.cos(t) ** N, math.asin(1.0 / r), math.pi / 2,
                            epsabs=0.0, epsrel=1e-13, limit=200)
    return 2.0 * unit_ball_volume(N - 1) * val


def phi_N(N: int, r: float) -> float:
    """``Phi_N(r) = (phi_N(r)/omega_N)^{1/N}``: normalized radius of the volume outside the unit slab."""
    return (phi_small(N, r) / unit_ball_volume(N)) ** (1.0 / N)
