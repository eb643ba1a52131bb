"""Explicit constants of the two-sided estimate for the sharp Poincare constant.

Lower side: ``sigma_{N,p} gamma / R^p <= lambda_p``. Upper side:
``lambda_p <= C_{N,p,gamma} / R^p``, where ``R`` is the capacitary inradius.
The upper constant is built from a shell width ``eps0`` chosen so that a
capacity ratio stays below the threshold fixed by ``gamma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .core import Exponents, Regime
from .exact import cap_ball_value, sphere_area, unit_ball_volume

LN2 = math.log(2.0)


def _check_gamma(gamma: float) -> None:
    if not (0.0 < gamma < 1.0):
        raise ValueError(f"gamma must lie in (0, 1), got {gamma!r}")


def _check_p_le_N(exp: Exponents) -> None:
    if exp.p > exp.N:
        raise ValueError("this constant is only defined for 1 <= p <= N")


def _log_expm1(x: float) -> float:
    """``log(exp(x) - 1)`` for ``x > 0`` without overflow."""
    return x + math.log(-math.expm1(-x)) if x > 1.0 else math.log(math.expm1(x))


@lru_cache(maxsize=64)
def lambda_p_ball(N: int, p: float, n_cells: int = 4096) -> float:
    """Numeric ``lambda_p(B_1)`` from the radial oracle, cached per ``(N, p)``."""
    from .radial import radial_lambda_p_ball
    return radial_lambda_p_ball(Exponents(N, p), n_cells)


@dataclass(frozen=True)
class BoundConfig:
    """External inputs: the Maz'ya-Poincare constant, ``lambda_p(B_1)`` and ``gamma``.

    ``mazya_poincare_C = None`` means "not supplied": the lower constant
    sigma cannot be evaluated. ``lambda_p_B1 = None`` means "use the numeric
    radial oracle".
    """

    mazya_poincare_C: Optional[float] = None
    lambda_p_B1: Optional[float] = None
    gamma: float = 0.5

    def __post_init__(self):
        if self.mazya_poincare_C is not None and not self.mazya_poincare_C > 0:
            raise ValueError("mazya_poincare_C must be positive")
        if self.lambda_p_B1 is not None and not self.lambda_p_B1 > 0:
            raise ValueError("lambda_p_B1 must be positive")
        _check_gamma(self.gamma)

    def lam(self, exp: Exponents) -> float:
        if self.lambda_p_B1 is not None:
            return float(self.lambda_p_B1)
        return lambda_p_ball(exp.N, exp.p)


@dataclass(frozen=True)
class TwoSidedConstants:
    sigma: Optional[float]
    C_upper: float
    eps0: float
    sigma_note: str = "sigma scales with the supplied Maz'ya-Poincare constant as C^p"


def capacity_comparison_factor(exp: Exponents, R: float, d: float, lambda_p_B1: float) -> float:
    """``(lambda_p(B_1)^{-1/p} R / d + 1)^p``, bounding ``cap(F;B_r) / cap(F;B_R)``."""
    if not R > 0:
        raise ValueError("R must be positive")
    if not d > 0:
        raise ValueError("the distance d must be positive")
    if not lambda_p_B1 > 0:
        raise ValueError("lambda_p(B_1) must be positive")
    p = exp.p
    return (lambda_p_B1 ** (-1.0 / p) * R / d + 1.0) ** p


def sigma_lower_constant(exp: Exponents, cfg: BoundConfig) -> float:
    """``C^p cap_p(B_1;B_2) / (2 sqrt(N) / lambda_p(B_1)^{1/p} + 1)``."""
    _check_p_le_N(exp)
    if cfg.mazya_poincare_C is None:
        raise ValueError("sigma needs the Maz'ya-Poincare constant (mazya_poincare_C)")
    N, p = exp.N, exp.p
    cap12 = cap_ball_value(N, p, 1.0, 2.0)
    return cfg.mazya_poincare_C ** p * cap12 / (2.0 * math.sqrt(N) / cfg.lam(exp) ** (1.0 / p) + 1.0)


def _alpha(N: int, gamma: float) -> float:
    g = gamma ** (1.0 / N)
    return ((1.0 + g) / (2.0 * g)) ** (N / (N - 1.0))


def epsilon0(exp: Exponents, gamma: float) -> float:
    """Shell width guaranteeing the capacity-ratio selection inequality.

    * ``1 < p < N``: ``min{1/(4(N-1)), 1/2 - [(2^a - 1) B^{p/(p-1)} + 1]^{-1/a}}``
      with ``a = (N-p)/(p-1)`` and ``B = (1 + gamma^{1/p}) / (2 gamma^{1/p})``;
    * ``p = N``: ``min{(1 - 2^{1-alpha})/2, 1/(4(N-1))}``, the ``p -> N`` limit of
      the previous branch (``alpha = B^{N/(N-1)}``);
    * ``p = 1``: ``min{1 - (2 gamma/(1+gamma))^{1/(N-1)}, 1/(2N)}``.
    """
    _check_gamma(gamma)
    _check_p_le_N(exp)
    N, p = exp.N, exp.p
    cap_branch = 1.0 / (4.0 * (N - 1))
    if exp.regime is Regime.P_EQ_1:
        return min(1.0 - (2.0 * gamma / (1.0 + gamma)) ** (1.0 / (N - 1)), 1.0 / (2.0 * N))
    if exp.regime is Regime.CONFORMAL:
        return min(-0.5 * math.expm1((1.0 - _alpha(N, gamma)) * LN2), cap_branch)
    a = (N - p) / (p - 1.0)
    g = gamma ** (1.0 / p)
    logB = math.log((1.0 + g) / (2.0 * g)) * p / (p - 1.0)
    # log X with X = (2^a - 1) B^{p/(p-1)} + 1, stable for large and small a
    t = _log_expm1(a * LN2) + logB
    logX = t + math.log1p(math.exp(-t)) if t > 0 else math.log1p(math.exp(t))
    return min(cap_branch, 0.5 - math.exp(-logX / a))


def selection_margin(exp: Exponents, gamma: float, eps: float, r: float = 1.0) -> float:
    """Left side minus right side of the selection inequality (nonnegative when it holds).

    For ``p > 1`` the inner shell radius is ``(1 - 2 eps) r`` and the
    inequality reads ``1 - gamma^{1/p} (cap(B_r;B_2r)/cap(B_{(1-2eps)r};B_2r))^{1/p}
    >= (1 - gamma^{1/p})/2``. For ``p = 1`` the outer shell radius
    ``(1 - eps) r`` enters instead, with exponent 1.
    """
    N, p = exp.N, exp.p
    g = gamma ** (1.0 / p)
    if p == 1.0:
        ratio = cap_ball_value(N, 1.0, r, 2 * r) / cap_ball_value(N, 1.0, (1 - eps) * r, 2 * r)
        return 1.0 - gamma * ratio - (1.0 - gamma) / 2.0
    ratio = cap_ball_value(N, p, r, 2 * r) / cap_ball_value(N, p, (1 - 2 * eps) * r, 2 * r)
    return 1.0 - g * ratio ** (1.0 / p) - (1.0 - g) / 2.0


def upper_constant(exp: Exponents, gamma: float) -> float:
    """``C_{N,p,gamma}`` of the upper bound ``lambda_p <= C / R^p``."""
    _check_gamma(gamma)
    _check_p_le_N(exp)
    N, p = exp.N, exp.p
    if p == 1.0:
        return 4.0 * N * (1.0 + gamma) / (1.0 - gamma)
    e0 = epsilon0(exp, gamma)
    ratio = cap_ball_value(N, p, 1.0, 2.0) / sphere_area(N)
    return (2.0 / (1.0 - gamma ** (1.0 / p))) ** p * 2.0 ** p * (e0 ** (-p) + gamma / e0 * ratio)


def upper_constant_q(exp: Exponents, gamma: float, q: float) -> float:
    """``C_{N,gamma,p,q}`` of ``lambda_{p,q} <= C / R^beta``, ``beta = p - N + N p / q``.

    Same chain as :func:`upper_constant` with the shell volume entering with
    the power ``p / q``; equals :func:`upper_constant` at ``q = p``.
    """
    _check_gamma(gamma)
    _check_p_le_N(exp)
    N, p = exp.N, exp.p
    if p == 1.0:
        raise ValueError("the q-constant is implemented for 1 < p <= N")
    sobolev_scaling_exponent(exp, q)
    e0 = epsilon0(exp, gamma)
    s = sphere_area(N)
    bracket = s / e0 ** (p - 1) + gamma * cap_ball_value(N, p, 1.0, 2.0)
    vol = 0.5 * s * e0          # lower bound on the shell volume at r = 1
    return (2.0 / (1.0 - gamma ** (1.0 / p))) ** p * 2.0 ** (p - 1) * vol ** (-p / q) * bracket


def upper_constant_unsimplified(exp: Exponents, gamma: float) -> float:
    """The constant before the volume estimate ``(1-e)^N - (1-2e)^N >= N e / 2``."""
    _check_gamma(gamma)
    N, p = exp.N, exp.p
    if not (1 < p <= N):
        raise ValueError("needs 1 < p <= N")
    e0 = epsilon0(exp, gamma)
    w = unit_ball_volume(N)
    shell = w * ((1 - e0) ** N - (1 - 2 * e0) ** N)
    bracket = N * w / e0 ** (p - 1) + gamma * cap_ball_value(N, p, 1.0, 2.0)
    return (2.0 / (1.0 - gamma ** (1.0 / p))) ** p * 2.0 ** (p - 1) / shell * bracket


def epsilon0_slope(exp: Exponents) -> float:
    """Limit of ``eps0 / (1 - gamma)`` as ``gamma -> 1`` for ``1 < p < N``."""
    N, p = exp.N, exp.p
    if exp.regime is not Regime.SUBCONFORMAL:
        raise ValueError("slope formula is for 1 < p < N")
    a = (N - p) / (p - 1.0)
    return math.expm1(a * LN2) / ((N - p) * 2.0 * 2.0 ** ((N - 1.0) / (p - 1.0)))


@dataclass
class AsymptoticsReport:
    N: int
    p: float
    gammas: list
    scaled: list
    ratios: list
    bounded: bool
    limit_estimate: float


def asymptotics_check(exp: Exponents, kmax: int = 6, rtol: float = 0.05) -> AsymptoticsReport:
    """Tabulate ``(1-gamma)^{2p} C`` (or ``(1-gamma) C`` at ``p = 1``) for ``gamma = 1 - 10^{-k}``."""
    _check_p_le_N(exp)
    power = 1.0 if exp.p == 1.0 else 2.0 * exp.p
    gammas = [1.0 - 10.0 ** (-k) for k in range(1, kmax + 1)]
    scaled = [(10.0 ** (-k)) ** power * upper_constant(exp, g)
              for k, g in zip(range(1, kmax + 1), gammas)]
    ratios = [b / a for a, b in zip(scaled[:-1], scaled[1:])]
    ok = all(math.isfinite(s) and s > 0 for s in scaled) and abs(ratios[-1] - 1.0) <= rtol
    return AsymptoticsReport(exp.N, exp.p, gammas, scaled, ratios, ok, scaled[-1])


@dataclass(frozen=True)
class ScalingExponent:
    beta: float
    lower_bound_applies: bool


def critical_exponent(exp: Exponents) -> float:
    N, p = exp.N, exp.p
    return N * p / (N - p) if p < N else math.inf


def sobolev_scaling_exponent(exp: Exponents, q: float) -> ScalingExponent:
    """``beta = p - N + N p / q``; the lower estimate needs ``q >= p``."""
    if not q >= 1:
        raise ValueError("q must be at least 1")
    if exp.p <= exp.N and not q < critical_exponent(exp):
        raise ValueError(f"q={q!r} is not subcritical (q < {critical_exponent(exp)!r} required)")
    N, p = exp.N, exp.p
    return ScalingExponent(p - N + N * p / q, q >= p)


def two_sided_constants(exp: Exponents, cfg: BoundConfig) -> TwoSidedConstants:
    """sigma (``None`` without a Maz'ya-Poincare constant), C and eps0."""
    sigma = None if cfg.mazya_poincare_C is None else sigma_lower_constant(exp, cfg)
    note = ("Maz'ya-Poincare constant not supplied; sigma omitted" if sigma is None
            else TwoSidedConstants.sigma_note)
    return TwoSidedConstants(sigma, upper_constant(exp, cfg.gamma), epsilon0(exp, cfg.gamma), note)
