"""Closed-form relative p-capacities of concentric balls and points.

All capacities are relative to a box ball ``B_R`` and use ``omega_N`` for the
volume (not the perimeter) of the unit ball.
"""

from __future__ import annotations

import math

from .core import (AnnulusGeometry, CapacityValue, Exponents, Method, Modulus,
                   Regime, Status, check_shell)

__all__ = [
    "unit_ball_volume", "unit_ball_volume_recursive", "sphere_area", "ball_volume",
    "shell_volume", "cap_ball", "cap_ball_value", "cap_point", "cap_scaling_check",
    "grotzsch_gap", "p_modulus", "isocap_lower_bound", "gamma0",
]


def unit_ball_volume(N: int) -> float:
    """Volume omega_N = pi^{N/2} / Gamma(N/2 + 1) of the unit ball in R^N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return math.pi ** (N / 2) / math.gamma(N / 2 + 1)


def unit_ball_volume_recursive(N: int) -> float:
    # omega_N = (2 pi / N) omega_{N-2}, omega_0 = 1, omega_1 = 2
    if N < 0:
        raise ValueError("N must be >= 0")
    w = 1.0 if N % 2 == 0 else 2.0
    for k in range(2 if N % 2 == 0 else 3, N + 1, 2):
        w *= 2 * math.pi / k
    return w


def sphere_area(N: int, r: float = 1.0) -> float:
    """H^{N-1}(boundary of B_r) = N omega_N r^{N-1}."""
    return N * unit_ball_volume(N) * r ** (N - 1)


def ball_volume(N: int, r: float) -> float:
    return unit_ball_volume(N) * r ** N


def shell_volume(N: int, r1: float, r2: float) -> float:
    return unit_ball_volume(N) * (r2 ** N - r1 ** N)


def cap_ball_value(N: int, p: float, r: float, R: float) -> float:
    """Plain-float capacity of the closed ball B_r relative to B_R."""
    if not (0 < r < R):
        raise ValueError(f"need 0 < r < R, got r={r!r}, R={R!r}")
    s = N * unit_ball_volume(N)
    if p == 1.0:
        return s * r ** (N - 1)
    if p == N:
        return s * math.log(R / r) ** (1 - N)
    a = (N - p) / (p - 1.0)
    # |a| / |1 - (r/R)^a| via expm1: stays accurate as a -> 0 (p -> N)
    q = abs(a / math.expm1(a * math.log(r / R)))
    return s * r ** (N - p) * q ** (p - 1.0)


def cap_ball(exp: Exponents, geom: AnnulusGeometry) -> CapacityValue:
    return CapacityValue(cap_ball_value(exp.N, exp.p, geom.r, geom.R))


def cap_point(exp: Exponents, R: float) -> CapacityValue:
    """Capacity of the center of B_R; positive only in the superconformal regime."""
    if not R > 0:
        raise ValueError("R must be positive")
    N, p = exp.N, exp.p
    if p <= N:
        return CapacityValue(0.0, Method.CLOSED_FORM, 0.0, Status.CAPACITY_NULL)
    v = N * unit_ball_volume(N) * ((p - N) / (p - 1.0)) ** (p - 1.0) * R ** (N - p)
    return CapacityValue(v)


def cap_scaling_check(exp: Exponents, r: float, R: float) -> float:
    """Relative residual of cap(B_r; B_R) = r^{N-p} cap(B_1; B_{R/r})."""
    lhs = cap_ball_value(exp.N, exp.p, r, R)
    rhs = r ** (exp.N - exp.p) * cap_ball_value(exp.N, exp.p, 1.0, R / r)
    return abs(lhs - rhs) / abs(lhs)


def log_grotzsch_gap(exp: Exponents, r1: float, r2: float, R: float):
    """Logarithms of both sides of :func:`grotzsch_gap`; safe for ``p`` near 1."""
    N, p = exp.N, exp.p
    if not (1 < p <= N):
        raise ValueError("grotzsch_gap needs 1 < p <= N")
    check_shell(r1, r2, R)
    e = 1.0 / (p - 1.0)
    first = math.log(shell_volume(N, r1, r2)) - p * e * math.log(sphere_area(N, r2))
    second = -e * math.log(cap_ball_value(N, p, r2, R))
    hi, lo = max(first, second), min(first, second)
    log_lhs = hi + math.log1p(math.exp(lo - hi))
    log_rhs = -e * math.log(cap_ball_value(N, p, r1, R))
    return log_lhs, log_rhs


def grotzsch_gap(exp: Exponents, r1: float, r2: float, R: float):
    """Both sides of the quantified monotonicity inequality lhs <= rhs.

    The sides are p-moduli and overflow to ``inf`` for ``p`` very close to 1;
    :func:`log_grotzsch_gap` stays finite.
    """
    log_lhs, log_rhs = log_grotzsch_gap(exp, r1, r2, R)
    big = 709.0
    return (math.exp(log_lhs) if log_lhs < big else math.inf,
            math.exp(log_rhs) if log_rhs < big else math.inf)


def p_modulus(cap, p: float) -> Modulus:
    value = float(cap)
    if not p > 1:
        raise ValueError("p-modulus needs p > 1")
    if value == 0.0:
        return Modulus(math.inf, Status.INFINITE)
    return Modulus(value ** (-1.0 / (p - 1.0)))


def isocap_lower_bound(exp: Exponents, vol_F: float, vol_box: float) -> float:
    """Symmetrization lower bound on cap_p(F; B) for |F| = vol_F, |B| = vol_box.

    Equals the capacity of the concentric ball of volume ``vol_F`` inside the
    ball of volume ``vol_box``. Written in the explicit volume form for
    ``p != N``; the conformal and ``p = 1`` cases use the radius form.
    """
    N, p = exp.N, exp.p
    if not (0 <= vol_F <= vol_box) or vol_box <= 0:
        raise ValueError(f"need 0 <= vol_F <= vol_box, got {vol_F!r}, {vol_box!r}")
    w = unit_ball_volume(N)
    if vol_F == vol_box:
        return math.inf if p > 1 else N * w * (vol_F / w) ** ((N - 1) / N)
    if p == 1.0:
        return N * w * (vol_F / w) ** ((N - 1) / N)
    if vol_F == 0.0:
        return cap_point(exp, (vol_box / w) ** (1.0 / N)).value
    if p == N:
        return cap_ball_value(N, p, (vol_F / w) ** (1 / N), (vol_box / w) ** (1 / N))
    e = (p - N) / (N * (p - 1.0))
    const = (N * w) ** (p / N) * N ** ((N - p) / N) * abs((N - p) / (p - 1.0)) ** (p - 1.0)
    return const * abs(vol_box ** e - vol_F ** e) ** (1.0 - p)


def gamma0(exp: Exponents) -> float:
    """Superconformal threshold cap({0}; B_2) / cap(B_1; B_2)."""
    N, p = exp.N, exp.p
    if exp.regime is not Regime.SUPERCONFORMAL:
        raise ValueError("gamma0 is defined only for p > N")
    return 2.0 ** (N - p) * math.expm1((p - N) / (p - 1.0) * math.log(2.0)) ** (p - 1.0)
