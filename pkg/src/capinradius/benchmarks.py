"""Eigenvalue estimates on benchmark domains and the two-sided sandwich check."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .constants import (BoundConfig, sigma_lower_constant, sobolev_scaling_exponent, upper_constant,
                        upper_constant_q)
from .core import Exponents, Regime
from .exact import unit_ball_volume
from .inradius import (DomainKind, DomainSpec, InradiusBracket, capacitary_inradius,
                       perforated_lambda_bound, slab_degeneration)
from .radial import radial_lambda_p_ball, rayleigh_radial

SCHEMA = "capinradius.sandwich/1"


@dataclass
class LambdaEstimate:
    """Discrete upper bound on ``lambda_{p,q}`` (value 0 when the infimum vanishes)."""

    value: float
    domain: DomainSpec
    exp: Exponents
    q: float
    resolution: int
    method: str = "numeric"
    bound: Optional[float] = None
    witness: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"value": self.value, "domain": self.domain.to_dict(),
                "N": self.exp.N, "p": self.exp.p, "q": self.q, "resolution": self.resolution,
                "method": self.method, "bound": self.bound,
                "witness": [list(w) for w in self.witness], "notes": list(self.notes)}


# --------------------------------------------------------------------------- #
# slab

def _cos_profile(w: float):
    k = math.pi / (2 * w)
    return (lambda x: np.cos(k * x)), (lambda x: -k * np.sin(k * x))


def _gl(a: float, b: float, n: int = 64):
    x, wt = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * wt


def spreading_quotient(exp: Exponents, q: float, L: float, w: float = 1.0) -> float:
    """Quotient ``int |grad u|^p / (int |u|^q)^{p/q}`` of ``u = cos(pi x_N / 2w) eta_L(|x'|)``.

    ``eta_L`` equals 1 on ``|x'| <= L`` and decays linearly to 0 at ``L + 1``.
    The quotient behaves like ``L^{(N-1)(1 - p/q)}`` and tends to zero for ``q < p``.
    """
    N, p = exp.N, exp.p
    v, dv = _cos_profile(w)
    x, wx = _gl(-w, w, 128)
    E1 = float(np.sum(wx * np.abs(dv(x)) ** p))
    Mq = float(np.sum(wx * np.abs(v(x)) ** q))
    cross = (N - 1) * unit_ball_volume(N - 1)
    plateau = unit_ball_volume(N - 1) * L ** (N - 1)
    rho, wr = _gl(L, L + 1.0, 48)
    eta = L + 1.0 - rho
    shell = cross * rho ** (N - 2)
    grad2 = dv(x)[None, :] ** 2 * eta[:, None] ** 2 + v(x)[None, :] ** 2
    ramp_energy = float(np.sum(wr * shell * np.sum(wx[None, :] * grad2 ** (p / 2.0), axis=1)))
    ramp_mass = Mq * float(np.sum(wr * shell * eta ** q))
    return (plateau * E1 + ramp_energy) / (plateau * Mq + ramp_mass) ** (p / q)


def _truncated_slab_field(L: float, w: float, cells_per_w: int):
    from .grid2d import CellTag, GridField2D
    h = w / cells_per_w
    n = int(math.ceil(2 * L / h)) + 2
    fld = GridField2D(n, h, (-n * h / 2, -n * h / 2))
    X, Y = fld.centers()
    outside = (np.abs(X) >= L) | (np.abs(Y) >= w)
    fld.mask[outside] = CellTag.BOUNDARY
    return fld


def lambda_slab(exp: Exponents, q: Optional[float] = None, w: float = 1.0,
                n_cells: int = 4096, lengths=(4.0, 8.0, 16.0), cells_per_w: int = 8) -> LambdaEstimate:
    """``lambda_{p,q}`` of the slab ``R^{N-1} x (-w, w)``.

    * ``q = p > 1``: the interval problem on ``(-w, w)``;
    * ``p = q = 1``: the Cheeger value ``1 / w`` with mollified indicators;
    * ``q < p``: 0, with the spreading witness at ``L = 10, 100, 1000``;
    * ``q > p`` (``N = 2``): grid eigenvalues of truncated slabs ``(-L, L) x (-w, w)``.
    """
    p = exp.p
    q = p if q is None else float(q)
    dom = DomainSpec.slab(exp.N, w)
    if q < p:
        wit = [(L, spreading_quotient(exp, q, L, w)) for L in (10.0, 100.0, 1000.0)]
        slope = math.log(wit[-1][1] / wit[-2][1]) / math.log(10.0)
        return LambdaEstimate(0.0, dom, exp, q, 0, "spreading-witness", witness=wit,
                              notes=[f"log-log slope {slope:.6g}, predicted "
                                     f"{(exp.N - 1) * (1 - p / q):.6g}"])
    if p == 1.0 and q == 1.0:
        wit = []
        for delta in (1e-1, 1e-2, 1e-3):
            # u = clamp((w - |x|)/delta, 0, 1): total variation 2, mass 2w - delta
            wit.append((delta, 2.0 / (2 * w - delta)))
        return LambdaEstimate(1.0 / w, dom, exp, q, 0, "cheeger", witness=wit,
                              notes=["mollified indicators of the cross-section"])
    if q == p:
        val = rayleigh_radial(1, p, q, w, n_cells)[0]
        return LambdaEstimate(val, dom, exp, q, n_cells, "interval-reduction")
    if exp.N != 2:
        raise ValueError("truncated-slab estimates for q > p are planar (N = 2)")
    from .grid2d import rayleigh_quotient_2d
    trend = []
    for L in lengths:
        fld = _truncated_slab_field(L, w, cells_per_w)
        trend.append((L, rayleigh_quotient_2d(exp, fld, q, tol=1e-9)))
    return LambdaEstimate(trend[-1][1], dom, exp, q, cells_per_w, "truncated-slab", witness=trend,
                          notes=["values on (-L, L) x (-w, w); no extrapolation in L"])


# --------------------------------------------------------------------------- #
# perforated lattice and balls

def lambda_perforated(exp: Exponents, eps: float, n: int = 129) -> LambdaEstimate:
    """Cell eigenvalue on ``[-1/2, 1/2]^2`` with ``u = 0`` on the hole, plus the capacity bound."""
    from .grid2d import perforated_cell, rayleigh_quotient_2d
    if exp.N != 2:
        raise ValueError("the perforated cell problem is planar (N = 2)")
    if not exp.p > 1:
        raise ValueError("need p > 1")
    val = rayleigh_quotient_2d(exp, perforated_cell(n, eps), tol=1e-10)
    return LambdaEstimate(val, DomainSpec.perforated_lattice(2, eps), exp, exp.p, n, "cell-grid",
                          bound=perforated_lambda_bound(exp, eps))


def lambda_ball(exp: Exponents, q: Optional[float] = None, r: float = 1.0,
                n_cells: int = 4096) -> LambdaEstimate:
    """Radial ``lambda_{p,q}(B_r)``."""
    q = exp.p if q is None else float(q)
    val = radial_lambda_p_ball(exp, n_cells, q=q, radius=r)
    return LambdaEstimate(val, DomainSpec.punctured_ball(exp.N, r), exp, q, n_cells, "radial",
                          notes=["ball (a point is capacity-null for p <= N)"])


def ball_scaling_residual(exp: Exponents, q: Optional[float] = None, r: float = 2.0,
                          n_cells: int = 4096) -> float:
    """Relative residual of ``lambda(B_r) = r^{-beta} lambda(B_1)``."""
    q = exp.p if q is None else float(q)
    beta = exp.p - exp.N + exp.N * exp.p / q
    one = lambda_ball(exp, q, 1.0, n_cells).value
    big = lambda_ball(exp, q, r, n_cells).value
    return abs(big * r ** beta - one) / one


# --------------------------------------------------------------------------- #
# sandwich

@dataclass
class SandwichReport:
    lambda_hat: dict
    bracket: dict
    sigma_gamma_over_hi_p: Optional[float]
    C_over_lo_p: Optional[float]
    upper_ok: Optional[bool]
    lower_ok: Optional[bool]
    beta: float
    gamma: float
    C_upper: float
    sigma: Optional[float]
    notes: list = field(default_factory=list)
    schema: str = SCHEMA

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SandwichReport":
        return cls(**data)


def _lambda_for(domain: DomainSpec, exp: Exponents, q: float, perforated_n: int) -> LambdaEstimate:
    if domain.kind is DomainKind.SLAB:
        return lambda_slab(exp, q, domain.size)
    if domain.kind is DomainKind.PERFORATED_LATTICE:
        if q != exp.p:
            raise ValueError("the perforated benchmark is implemented for q = p")
        return lambda_perforated(exp, domain.size, perforated_n)
    if domain.kind is DomainKind.PUNCTURED_BALL:
        if exp.p > exp.N:
            raise ValueError("p > N punctured-ball sandwich is not covered")
        return lambda_ball(exp, q, domain.size)
    raise ValueError(f"no eigenvalue benchmark for {domain.kind.value}")


def verify_sandwich(domain: DomainSpec, exp: Exponents, q: Optional[float], gamma: float,
                    cfg: Optional[BoundConfig] = None, bracket: Optional[InradiusBracket] = None,
                    lam: Optional[LambdaEstimate] = None, perforated_n: int = 129) -> SandwichReport:
    """Check ``sigma gamma / hi^beta <= lambda <= C / lo^beta`` with conservative ends.

    The lower check runs only for ``q >= p`` and when the Maz'ya-Poincare
    constant is supplied in ``cfg``; skipped checks are reported as ``None``.
    """
    if exp.regime is Regime.SUPERCONFORMAL:
        raise ValueError("the sandwich constants need 1 <= p <= N")
    q = exp.p if q is None else float(q)
    cfg = cfg or BoundConfig(gamma=gamma)
    if cfg.gamma != gamma:
        cfg = BoundConfig(cfg.mazya_poincare_C, cfg.lambda_p_B1, gamma)
    lam = lam or _lambda_for(domain, exp, q, perforated_n)
    bracket = bracket or capacitary_inradius(domain, exp, gamma)
    beta = exp.p - exp.N + exp.N * exp.p / q
    notes = []
    if q == exp.p:
        C = upper_constant(exp, gamma)
    elif exp.p > 1.0:
        C = upper_constant_q(exp, gamma, q)
        notes.append("C for q != p derived at runtime from the q = p chain")
    else:
        raise ValueError("q != p needs p > 1")
    upper_val = upper_ok = None
    if math.isfinite(bracket.lo) and bracket.lo > 0:
        upper_val = C / bracket.lo ** beta
        upper_ok = lam.value <= upper_val
    else:
        notes.append("bracket lower end unavailable; upper check skipped")
    sigma = lower_val = lower_ok = None
    if cfg.mazya_poincare_C is not None:
        sigma = sigma_lower_constant(exp, cfg)
        if math.isfinite(bracket.hi):
            lower_val = sigma * gamma / bracket.hi ** beta
        if q > exp.p:
            notes.append("sigma uses the supplied Maz'ya-Poincare constant, which must be "
                         "the one for this q")
    if q < exp.p:
        sobolev_scaling_exponent(exp, q)
        notes.append("q < p: lower estimate not applicable (q >= p is required); "
                     f"lambda = {lam.value!r} while the bracket is finite")
    elif lower_val is None:
        notes.append("lower check skipped: Maz'ya-Poincare constant not supplied "
                     "or bracket upper end unbounded")
    else:
        lower_ok = lower_val <= lam.value
    return SandwichReport(lam.to_dict(), bracket.to_dict(), lower_val, upper_val, upper_ok,
                          lower_ok, beta, gamma, C, sigma, notes)


@dataclass
class DegenerationRow:
    r: float
    gamma_lo: float
    gamma_hi: float
    C_gamma: float
    C_over_r_p: float
    lambda_hat: float
    ok: bool


def degeneration_table(exp: Exponents, ks=range(1, 7), lam: Optional[float] = None):
    """Rows for ``r = 2^k``: ``C_{N,p,gamma_r} / r^p`` against the slab eigenvalue.

    ``C`` is evaluated at the lower bound of ``gamma_r``; since ``C`` grows
    with ``gamma`` this understates the true constant.
    """
    lam = lam if lam is not None else lambda_slab(exp).value
    rows = []
    for k in ks:
        r = 2.0 ** k
        d = slab_degeneration(exp, r)
        C = upper_constant(exp, d.gamma_lo)
        rows.append(DegenerationRow(r, d.gamma_lo, d.gamma_hi, C, C / r ** exp.p, lam,
                                    C / r ** exp.p >= lam))
    return rows
