"""Shooting for the first radial Dirichlet eigenvalue of the p-Laplacian.

With ``lambda = 1`` the radial equation, written for the flux
``w = rho^{N-1} |v'|^{p-2} v'``, reads ``w' = -rho^{N-1} |v|^{p-2} v``. Starting
from ``v(0) = 1`` we integrate to the first zero ``z`` of ``v``; by scaling the
first eigenvalue of the ball of radius ``t`` is ``(z / t)^p``. ``N = 1`` is the
symmetric interval.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import solve_ivp

RHO0 = 1e-5


def _start(N: int, p: float, rho0: float):
    # near 0: w ~ -rho^N / N, v ~ 1 - (p-1)/p N^{-1/(p-1)} rho^{p/(p-1)}
    e = 1.0 / (p - 1.0)
    v0 = 1.0 - (p - 1.0) / p * N ** (-e) * rho0 ** (p * e)
    w0 = -rho0 ** N / N
    return np.array([v0, w0])


def _rhs(N: int, p: float):
    e = 1.0 / (p - 1.0)

    def f(rho, y):
        v, w = y
        dv = math.copysign(abs(w / rho ** (N - 1)) ** e, w)
        dw = -rho ** (N - 1) * abs(v) ** (p - 2.0) * v if v != 0 else 0.0
        return [dv, dw]
    return f


def first_zero(N: int, p: float, rtol: float = 1e-12, rho_max: float = 1e3) -> float:
    """First zero of the radial eigenfunction for ``lambda = 1``."""
    if N < 1 or p <= 1:
        raise ValueError("need N >= 1 and p > 1")

    def hit(rho, y):
        return y[0]
    hit.terminal = True
    hit.direction = -1

    sol = solve_ivp(_rhs(N, p), (RHO0, rho_max), _start(N, p, RHO0), method="DOP853",
                    rtol=rtol, atol=1e-14, events=hit)
    if not sol.t_events[0].size:
        raise ArithmeticError("no sign change found while shooting")
    return float(sol.t_events[0][0])


def lambda_ball_shooting(N: int, p: float, radius: float = 1.0) -> float:
    """First Dirichlet eigenvalue of the p-Laplacian on ``B_radius`` (``N = 1``: interval)."""
    return (first_zero(N, p) / radius) ** p


def bessel_check(N: int) -> tuple:
    """``(relative gap, zero)`` between shooting at ``p = 2`` and the Bessel zero of ``J_{N/2-1}``."""
    from scipy.optimize import brentq
    from scipy.special import jn_zeros, jv
    nu = N / 2.0 - 1.0
    if nu == int(nu) and nu >= 0:
        z = float(jn_zeros(int(nu), 1)[0])
    else:
        z = brentq(lambda x: jv(nu, x), 1e-6 + max(nu, 0.0), nu + 4.0)
    return abs(first_zero(N, 2.0) - z) / z, z


