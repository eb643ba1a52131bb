"""Explicit shell potentials and the L^1 - L^p Poincare constants of a shell.

For ``S = B_{r2} minus closed B_{r1}`` inside the box ``B_R`` the radial
minimizer ``V`` of ``(1/p) int |grad phi|^p - int_S phi`` is known in closed
form: constant on ``[0, r1]``, with ``(-v')^{p-1} = rho/N - r1^N/(N rho^{N-1})``
across the shell and a rescaled capacitary potential of ``B_{r2}`` outside.
Energies are handled as logarithms because they behave like
``K^{1/(p-1)}`` as ``p`` approaches 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .core import Exponents, check_shell
from .exact import cap_ball_value, shell_volume, sphere_area, unit_ball_volume

QUAD_RTOL = 1e-12


def _check(exp: Exponents, r1: float, r2: float, R: float) -> None:
    if not (1 < exp.p <= exp.N):
        raise ValueError("shell constants need 1 < p <= N; use the p = 1 entry points")
    check_shell(r1, r2, R)


def _g(N: int, r1: float, rho):
    """``(-v')^{p-1}`` on the shell: ``rho/N - r1^N / (N rho^{N-1})``."""
    return rho / N * (1.0 - (r1 / rho) ** N)


def _tail_shape(N: int, p: float, r2: float, R: float, rho):
    """Capacitary potential of ``B_{r2}`` in ``B_R`` (1 at ``r2``, 0 at ``R``)."""
    rho = np.asarray(rho, dtype=float)
    if p == N:
        return np.log(R / rho) / math.log(R / r2)
    a = (N - p) / (p - 1.0)
    # (rho^-a - R^-a)/(r2^-a - R^-a) written with expm1 for accuracy at small a
    num = np.expm1(-a * np.log(rho / R))
    den = math.expm1(-a * math.log(r2 / R))
    return num / den


def _layer_pieces(a: float, b: float, levels: int = 16):
    """Breakpoints accumulating geometrically at ``b``."""
    pts = [a]
    L = b - a
    for j in range(1, levels):
        x = b - L * 10.0 ** (-j)
        if L * 10.0 ** (-j) < 1e-10 * b:
            break
        if x > pts[-1]:
            pts.append(x)
    pts.append(b)
    return pts


def _log_shell_integral(N: int, p: float, r1: float, r2: float) -> float:
    """log of ``N omega_N int_{r1}^{r2} g(rho)^{p/(p-1)} rho^{N-1} d rho``."""
    e = p / (p - 1.0)
    M = _g(N, r1, r2)

    def f(rho):
        return (_g(N, r1, rho) / M) ** e * rho ** (N - 1)

    total = 0.0
    pts = _layer_pieces(r1, r2)
    # the integrand is at most r2^{N-1}; pieces far below that need no relative accuracy
    floor = 1e-3 * QUAD_RTOL * r2 ** (N - 1) * (r2 - r1)
    for lo, hi in zip(pts[:-1], pts[1:]):
        val, err = integrate.quad(f, lo, hi, epsabs=floor, epsrel=QUAD_RTOL, limit=200)
        total += val
    if not total > 0:
        raise ArithmeticError("shell quadrature vanished")
    return math.log(N * unit_ball_volume(N)) + e * math.log(M) + math.log(total)


def log_shell_energy(exp: Exponents, r1: float, r2: float, R: float) -> float:
    """Natural log of :func:`shell_energy_closed_form`."""
    _check(exp, r1, r2, R)
    N, p = exp.N, exp.p
    e = 1.0 / (p - 1.0)
    inner = _log_shell_integral(N, p, r1, r2)
    tail = p * e * math.log(shell_volume(N, r1, r2)) - e * math.log(cap_ball_value(N, p, r2, R))
    return float(np.logaddexp(inner, tail))


def shell_energy_closed_form(exp: Exponents, r1: float, r2: float, R: float) -> float:
    """``int |grad V|^p``: shell quadrature plus ``|S|^{p/(p-1)} cap(B_{r2};B_R)^{-1/(p-1)}``.

    May overflow to ``inf`` for ``p`` extremely close to 1; use
    :func:`log_shell_energy` there.
    """
    le = log_shell_energy(exp, r1, r2, R)
    return math.exp(le) if le < 709.0 else math.inf


def log_sharp_shell_constant(exp: Exponents, r1: float, r2: float, R: float) -> float:
    return (exp.p - 1.0) * log_shell_energy(exp, r1, r2, R)


def sharp_shell_constant(exp: Exponents, r1: float, r2: float, R: float) -> float:
    """Best constant in ``(int_S |phi|)^p <= C int_{B_R} |grad phi|^p``."""
    return math.exp(log_sharp_shell_constant(exp, r1, r2, R))


def normalized_sharp_constant(exp: Exponents, r1: float, r2: float, R: float) -> float:
    """Sharp constant for the mean ``(avg_S |phi|)^p``, i.e. sharp / |S|^p."""
    lv = math.log(shell_volume(exp.N, r1, r2))
    return math.exp(log_sharp_shell_constant(exp, r1, r2, R) - exp.p * lv)


def handy_shell_bound(exp: Exponents, r1: float, r2: float, R: float) -> float:
    """``[|S| / H(dB_{r2})^{p/(p-1)} + cap(B_{r2};B_R)^{-1/(p-1)}]^{p-1}``."""
    _check(exp, r1, r2, R)
    N, p = exp.N, exp.p
    e = 1.0 / (p - 1.0)
    first = math.log(shell_volume(N, r1, r2)) - p * e * math.log(sphere_area(N, r2))
    second = -e * math.log(cap_ball_value(N, p, r2, R))
    return math.exp((p - 1.0) * float(np.logaddexp(first, second)))


def rough_shell_bound(exp: Exponents, r1: float, R: float) -> float:
    """``1 / cap(B_{r1}; B_R)``."""
    if not (1 < exp.p <= exp.N):
        raise ValueError("rough bound needs 1 < p <= N")
    return 1.0 / cap_ball_value(exp.N, exp.p, r1, R)


def shell_constant_p1(N: int, r1: float, r2: float, R: float) -> float:
    """Sharp ``p = 1`` constant ``|S| / (N omega_N r2^{N-1})``."""
    check_shell(r1, r2, R)
    return shell_volume(N, r1, r2) / sphere_area(N, r2)


def cheeger_shell_constant(N: int, r1: float, r2: float, R: float) -> float:
    """``H(dB_{r2}) / |S|``, the reciprocal of :func:`shell_constant_p1`."""
    check_shell(r1, r2, R)
    return sphere_area(N, r2) / shell_volume(N, r1, r2)


def cheeger_ball_scan(N: int, r1: float, r2: float, R: float, n: int = 20001):
    """Scan ``t -> H(dB_t)/|B_t cap S|`` over ``t`` in ``(r1, R)``; returns ``(t*, min)``."""
    check_shell(r1, r2, R)
    t = np.linspace(r1, R, n + 1)[1:-1]
    inter = unit_ball_volume(N) * (np.minimum(t, r2) ** N - r1 ** N)
    ratio = sphere_area(N, 1.0) * t ** (N - 1) / inter
    k = int(np.argmin(ratio))
    return float(t[k]), float(ratio[k])


def smoothed_indicator_ratio(N: int, r1: float, r2: float, R: float,
                             delta: float = 1e-3) -> float:
    """``int_S phi / int |grad phi|`` for a radially smoothed indicator of ``B_{r2}``.

    ``phi(rho) = eta((r2 - rho)/delta)`` with the C^infinity step ``eta``
    built from ``exp(-1/t)``; as ``delta -> 0`` the ratio tends to the sharp
    ``p = 1`` constant.
    """
    check_shell(r1, r2, R)
    if not (0 < delta < min(r2 - r1, R - r2)):
        raise ValueError("delta must be smaller than the gaps r2 - r1 and R - r2")

    def bump(t):
        return np.where(t > 0, np.exp(-1.0 / np.maximum(t, 1e-300)), 0.0)

    def eta(t):  # 0 for t <= -1, 1 for t >= 1
        s = (t + 1.0) / 2.0
        return bump(s) / (bump(s) + bump(1.0 - s))

    def deta(t):
        h = 1e-7
        return (eta(t + h) - eta(t - h)) / (2 * h)

    c = sphere_area(N, 1.0)
    lo, hi = r2 - delta, r2 + delta
    mass_core = unit_ball_volume(N) * (lo ** N - r1 ** N)
    mass_layer, _ = integrate.quad(lambda x: c * x ** (N - 1) * float(eta((r2 - x) / delta)),
                                   lo, r2, epsabs=0.0, epsrel=1e-12, limit=200)
    grad, _ = integrate.quad(lambda x: c * x ** (N - 1) * abs(float(deta((r2 - x) / delta))) / delta,
                             lo, hi, epsabs=0.0, epsrel=1e-10, limit=200)
    return (mass_core + mass_layer) / grad


@dataclass(frozen=True)
class ShellProfile:
    """Closed-form radial minimizer of the shell problem."""

    N: int
    p: float
    r1: float
    r2: float
    R: float
    v_r2: float
    v_plateau: float

    def slope(self, rho):
        """``-v'(rho)``."""
        rho = np.asarray(rho, dtype=float)
        N, p, r1, r2 = self.N, self.p, self.r1, self.r2
        out = np.zeros_like(rho)
        mid = (rho > r1) & (rho <= r2)
        out[mid] = _g(N, r1, rho[mid]) ** (1.0 / (p - 1.0))
        tail = rho > r2
        if np.any(tail):
            if p == N:
                out[tail] = self.v_r2 / (rho[tail] * math.log(self.R / r2))
            else:
                a = (N - p) / (p - 1.0)
                den = math.expm1(-a * math.log(r2 / self.R))
                out[tail] = self.v_r2 * a * (self.R / rho[tail]) ** a / rho[tail] / den
        return out

    def __call__(self, rho):
        rho = np.atleast_1d(np.asarray(rho, dtype=float))
        out = np.empty_like(rho)
        e = 1.0 / (self.p - 1.0)
        for k, x in enumerate(rho):
            if x >= self.R:
                out[k] = 0.0
            elif x >= self.r2:
                out[k] = self.v_r2 * float(_tail_shape(self.N, self.p, self.r2, self.R, x))
            else:
                lo = max(x, self.r1)
                val, _ = integrate.quad(lambda s: _g(self.N, self.r1, s) ** e, lo, self.r2,
                                        epsabs=0.0, epsrel=1e-12, limit=200)
                out[k] = self.v_r2 + val
        return out


def shell_profile(exp: Exponents, r1: float, r2: float, R: float) -> ShellProfile:
    """Assemble the exact minimizer; ``v(r2) = (|S| / cap(B_{r2};B_R))^{1/(p-1)}``."""
    _check(exp, r1, r2, R)
    N, p = exp.N, exp.p
    v_r2 = (shell_volume(N, r1, r2) / cap_ball_value(N, p, r2, R)) ** (1.0 / (p - 1.0))
    e = 1.0 / (p - 1.0)
    rise, _ = integrate.quad(lambda s: _g(N, r1, s) ** e, r1, r2,
                             epsabs=0.0, epsrel=1e-12, limit=200)
    return ShellProfile(N, p, r1, r2, R, v_r2, v_r2 + rise)
