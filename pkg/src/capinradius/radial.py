"""One-dimensional radial finite elements for p-energies.

Every problem here is posed over continuous piecewise-linear profiles
``v(rho)`` on a radial mesh, with the exact cell weights
``W_i = omega_N (rho_{i+1}^N - rho_i^N)`` so that the discrete energy
``sum_i W_i |d_i|^p`` (``d_i`` the slope on cell ``i``) is the true p-energy of
the radial function. Discrete minima are therefore genuine upper bounds for
the continuum infima.

In one radial variable the discrete Euler-Lagrange system is solved in closed
form by integrating the flux: node ``j`` balances the fluxes of its two
cells, so the cell flux is minus the cumulative load. The solve is O(n) and
exact up to rounding. All large powers are carried in log form because the
exponent ``1/(p - 1)`` is huge for ``p`` near 1. A damped Newton solver on the
smoothed energy is kept as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded
from scipy.special import logsumexp

from . import mesh
from .core import (AnnulusGeometry, CapacityValue, Exponents, Method, SolveReport,
                   SolverError, check_shell)
from .exact import unit_ball_volume

GL_POINTS = 8
_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_POINTS)


@dataclass
class RadialGrid:
    """Piecewise-linear radial profile; actual values are ``values * exp(log_scale)``."""

    nodes: np.ndarray
    values: np.ndarray
    log_scale: float = 0.0

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.nodes.shape != self.values.shape:
            raise ValueError("nodes and values must have the same length")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("radial nodes must be strictly increasing")

    def profile(self) -> np.ndarray:
        return self.values * math.exp(self.log_scale)

    def __call__(self, rho):
        return np.interp(rho, self.nodes, self.values) * math.exp(self.log_scale)


# --------------------------------------------------------------------------- #
# assembly helpers

def cell_weights(N: int, nodes: np.ndarray) -> np.ndarray:
    """Exact volumes ``omega_N (b^N - a^N)`` of the radial cells, cancellation free."""
    a, b = nodes[:-1], nodes[1:]
    h = b - a
    s = np.zeros_like(a)
    for k in range(N):
        s += b ** k * a ** (N - 1 - k)
    return unit_ball_volume(N) * h * s


def _quad_points(nodes: np.ndarray):
    a, b = nodes[:-1, None], nodes[1:, None]
    x = 0.5 * (a + b) + 0.5 * (b - a) * _GL_X[None, :]
    w = 0.5 * (b - a) * _GL_W[None, :]
    return x, w


def hat_loads(N: int, nodes: np.ndarray, density=None, cell_mask=None) -> np.ndarray:
    """Load vector ``f_j = int g phi_j dx`` against the radial hat functions.

    ``density`` maps (quadrature radii, cell index array) to values of ``g``;
    ``None`` means ``g = 1``. ``cell_mask`` restricts the support to the chosen
    cells (the mesh must resolve the support's endpoints).
    """
    x, w = _quad_points(nodes)
    a, b = nodes[:-1, None], nodes[1:, None]
    lam = (x - a) / (b - a)
    jac = N * unit_ball_volume(N) * x ** (N - 1) * w
    g = np.ones_like(x) if density is None else density(x)
    if cell_mask is not None:
        g = g * cell_mask[:, None]
    left = np.sum(g * (1.0 - lam) * jac, axis=1)
    right = np.sum(g * lam * jac, axis=1)
    f = np.zeros(len(nodes))
    f[:-1] += left
    f[1:] += right
    return f


def integrate_power(N: int, nodes: np.ndarray, values: np.ndarray, q: float,
                    cell_mask=None) -> float:
    """``int |v|^q dx`` of the piecewise-linear radial profile (Gauss-Legendre per cell)."""
    x, w = _quad_points(nodes)
    a, b = nodes[:-1, None], nodes[1:, None]
    lam = (x - a) / (b - a)
    v = values[:-1, None] * (1 - lam) + values[1:, None] * lam
    jac = N * unit_ball_volume(N) * x ** (N - 1) * w
    dens = np.abs(v) ** q * jac
    if cell_mask is not None:
        dens = dens * cell_mask[:, None]
    return float(np.sum(dens))


def p_energy(N: int, p: float, nodes: np.ndarray, values: np.ndarray) -> float:
    d = np.diff(values) / np.diff(nodes)
    return float(np.sum(cell_weights(N, nodes) * np.abs(d) ** p))


def _rev_logcumsum(x: np.ndarray) -> np.ndarray:
    return np.logaddexp.accumulate(x[::-1])[::-1]


# --------------------------------------------------------------------------- #
# flux-integration solvers

@dataclass
class FluxSolution:
    nodes: np.ndarray
    log_slope: np.ndarray     # log |d_i|, slopes are all <= 0
    log_values: np.ndarray    # log v_j, v_n = 0
    log_energy: float         # log sum W_i |d_i|^p
    log_work: float           # log sum f_j v_j
    residual: float           # relative mismatch of energy and work


def flux_solve(N: int, p: float, nodes: np.ndarray, loads: np.ndarray) -> FluxSolution:
    """Exact discrete minimizer of ``(1/p) E(v) - <f, v>`` with ``v(nodes[-1]) = 0``.

    The innermost node carries a natural condition (zero flux), which is the
    symmetry condition at ``rho = 0`` or a free inner end. Loads must be
    nonnegative, which makes the minimizer nonnegative and non-increasing.
    """
    if p <= 1:
        raise ValueError("flux_solve needs p > 1")
    if np.any(loads < 0):
        raise ValueError("loads must be nonnegative")
    h = np.diff(nodes)
    W = cell_weights(N, nodes)
    G = np.cumsum(loads[:-1])
    with np.errstate(divide="ignore"):
        log_d = (np.log(G) + np.log(h) - np.log(W)) / (p - 1.0)
        inc = log_d + np.log(h)
        log_v = np.empty(len(nodes))
        log_v[:-1] = _rev_logcumsum(inc)
        log_v[-1] = -np.inf
        log_E = float(logsumexp(np.log(W) + p * log_d))
        log_L = float(logsumexp(np.log(loads) + log_v))
    resid = abs(math.expm1(log_E - log_L)) if np.isfinite(log_E) else math.inf
    return FluxSolution(nodes, log_d, log_v, log_E, log_L, resid)


def capacity_flux(N: int, p: float, nodes: np.ndarray):
    """Exact discrete capacity of the inner sphere: returns ``(log cap, values)``.

    Minimizes ``sum W_i |d_i|^p`` subject to ``v = 1`` at the first node and
    ``0`` at the last. With increments ``s_i = d_i h_i`` the optimum is
    ``s_i ~ a_i^{-1/(p-1)}``, ``a_i = W_i / h_i^p``.
    """
    h = np.diff(nodes)
    W = cell_weights(N, nodes)
    log_c = -(np.log(W) - p * np.log(h)) / (p - 1.0)
    log_S = float(logsumexp(log_c))
    inc = np.exp(log_c - log_S)
    values = np.empty(len(nodes))
    values[:-1] = np.cumsum(inc[::-1])[::-1]
    values[-1] = 0.0
    values = np.minimum(values, 1.0)
    return -(p - 1.0) * log_S, values


# --------------------------------------------------------------------------- #
# damped Newton cross-check

EPS_SCHEDULE = tuple(10.0 ** (-k) for k in range(2, 11))


def newton_radial(N: int, p: float, nodes: np.ndarray, loads: np.ndarray,
                  pinned: dict, tol: float = 1e-10, max_iter: int = 100000,
                  init=None):
    """Damped Newton with epsilon-continuation on the smoothed radial energy.

    Minimizes ``(1/p) sum W_i (d_i^2 + eps^2)^{p/2} - <f, v>`` over nodal values
    with the nodes in ``pinned`` (index -> value) held fixed. The epsilon
    schedule runs 1e-2 -> 1e-10 relative to the mean slope scale.
    """
    n = len(nodes)
    h = np.diff(nodes)
    W = cell_weights(N, nodes)
    free = np.array([j for j in range(n) if j not in pinned])
    v = np.linspace(1.0, 0.0, n) if init is None else np.array(init, dtype=float)
    for j, val in pinned.items():
        v[j] = val
    scale = 1.0 / (nodes[-1] - nodes[0])
    it = 0
    E_prev = math.inf

    def objective(vv, eps):
        d = np.diff(vv) / h
        return float(np.sum(W * (d * d + eps * eps) ** (p / 2)) / p - loads @ vv)

    for eps_rel in EPS_SCHEDULE:
        eps = eps_rel * scale
        for _ in range(200):
            it += 1
            if it > max_iter:
                raise SolverError("radial Newton exhausted its iteration budget",
                                  SolveReport(E_prev, it, math.inf, False, tol))
            d = np.diff(v) / h
            s = d * d + eps * eps
            flux = W * s ** (p / 2 - 1) * d / h          # dE/d(d_i) / h_i
            grad = -loads.copy()
            grad[:-1] -= flux
            grad[1:] += flux
            c = W * s ** (p / 2 - 2) * ((p - 1) * d * d + eps * eps) / (h * h)
            diag = np.zeros(n)
            diag[:-1] += c
            diag[1:] += c
            off = -c
            # restrict to free nodes (pinned nodes are contiguous ends in practice)
            mask = np.zeros(n, bool)
            mask[free] = True
            ab = np.zeros((3, n))
            ab[1] = np.where(mask, diag, 1.0)
            up = np.where(mask[:-1] & mask[1:], off, 0.0)
            ab[0, 1:] = up
            ab[2, :-1] = up
            rhs = np.where(mask, -grad, 0.0)
            step = solve_banded((1, 1), ab, rhs)
            E0 = objective(v, eps)
            slope = float(grad[mask] @ step[mask])
            t = 1.0
            while t > 1e-12:
                trial = v + t * step
                E1 = objective(trial, eps)
                if E1 <= E0 + 1e-4 * t * slope:
                    break
                t *= 0.5
            v = trial
            if abs(E0 - E1) <= tol * max(abs(E1), 1e-300):
                break
        E_prev = E1
    return v, SolveReport(E_prev, it, abs(E0 - E1) / max(abs(E1), 1e-300), True, tol)


# --------------------------------------------------------------------------- #
# public operations

GRADING = 0.5  # fraction of the decay exponent used as mesh grading rate


def capacity_mesh(N: int, p: float, r: float, R: float, n_cells: int) -> np.ndarray:
    return mesh.log_graded(r, R, n_cells, GRADING * (N - p) / (p - 1.0))


def radial_capacity(exp: Exponents, geom: AnnulusGeometry, n_cells: int = 4096,
                    tol: float = 1e-10, solver: str = "flux", nodes=None):
    """Discrete capacity of ``B_r`` in ``B_R`` by minimizing the radial p-energy.

    Returns ``(CapacityValue, RadialGrid, SolveReport)``; the value is an
    upper bound that decreases to the continuum capacity under refinement.
    """
    N, p = exp.N, exp.p
    if p <= 1:
        raise ValueError("numeric capacity is only defined for p > 1")
    if n_cells < 16:
        raise ValueError("n_cells must be at least 16")
    if nodes is None:
        nodes = capacity_mesh(N, p, geom.r, geom.R, n_cells)
    if solver == "flux":
        log_cap, values = capacity_flux(N, p, nodes)
        cap = math.exp(log_cap)
        report = SolveReport(cap, 1, 0.0, True, tol, ["flux integration"])
    elif solver == "newton":
        values, report = newton_radial(N, p, nodes, np.zeros(len(nodes)),
                                       {0: 1.0, len(nodes) - 1: 0.0}, tol)
        cap = p_energy(N, p, nodes, values)
        report.energy = cap
    else:
        raise ValueError(f"unknown solver {solver!r}")
    if values.min() < -1e-12 or values.max() > 1 + 1e-12:
        raise SolverError("capacitary profile left [0, 1]", report)
    return CapacityValue(cap, Method.NUMERIC, tol), RadialGrid(nodes, values), report


def shell_mesh(N: int, p: float, r1: float, r2: float, R: float, n_cells: int) -> np.ndarray:
    """Mesh containing ``r1`` and ``r2`` as nodes, graded toward ``r2`` on both sides."""
    n0 = max(4, n_cells // 32)
    n1 = int(0.7 * (n_cells - n0))
    n2 = n_cells - n0 - n1
    # the slope grows like g(rho)^{1/(p-1)} with g'/g of order N/r2 + 1/(r2-r1);
    # a third of the energy-equidistributing rate balances the P1 error
    inner_rate = 0.1 * (N / r2 + 1.0 / (r2 - r1)) / (p - 1.0)
    plateau = mesh.uniform(0.0, r1, n0)
    shell = mesh.graded_interval(r1, r2, n1, inner_rate, "right")
    tail = mesh.log_graded(r2, R, n2, GRADING * (N - p) / (p - 1.0))
    return np.concatenate([plateau, shell[1:], tail[1:]])


@dataclass
class ShellSolution:
    energy: float
    log_energy: float
    grid: RadialGrid
    report: SolveReport


def shell_potential_numeric(exp: Exponents, r1: float, r2: float, R: float,
                            n_cells: int = 8192, tol: float = 1e-10,
                            nodes=None) -> ShellSolution:
    """Discrete minimizer of ``(1/p) int |grad phi|^p - int_S phi`` over radial P1 profiles.

    The reported energy is ``int |grad V|^p`` of the discrete minimizer; the
    work ``int_S V`` is checked against it (they coincide at the discrete
    minimizer) and the mismatch is stored as the residual.
    """
    N, p = exp.N, exp.p
    if not (1 < p <= N):
        raise ValueError("shell problem needs 1 < p <= N")
    check_shell(r1, r2, R)
    if n_cells < 16:
        raise ValueError("n_cells must be at least 16")
    if nodes is None:
        nodes = shell_mesh(N, p, r1, r2, R, n_cells)
    mid = 0.5 * (nodes[:-1] + nodes[1:])
    in_shell = ((mid > r1) & (mid < r2)).astype(float)
    loads = hat_loads(N, nodes, cell_mask=in_shell)
    sol = flux_solve(N, p, nodes, loads)
    # rounding in the slopes is amplified by 1/(p-1) through the exponent
    if sol.residual > max(tol, 1e-9, 64 * np.finfo(float).eps / (p - 1.0)):
        raise SolverError("shell energy identity violated",
                          SolveReport(math.exp(min(sol.log_energy, 700.0)), 1,
                                      sol.residual, False, tol))
    top = float(sol.log_values[0])
    values = np.exp(sol.log_values - top)
    grid = RadialGrid(nodes, values, top)
    energy = math.exp(sol.log_energy) if sol.log_energy < 709 else math.inf
    report = SolveReport(energy, 1, sol.residual, True, tol, ["flux integration"])
    return ShellSolution(energy, sol.log_energy, grid, report)


def shell_rayleigh_max(exp: Exponents, r1: float, r2: float, R: float,
                       n_cells: int = 8192) -> tuple:
    """Maximize ``(int_S |phi|)^p / int |grad phi|^p`` over radial P1 profiles.

    Returns ``(log of the discrete maximum, normalized maximizer grid)``. The
    quotient is evaluated from the maximizer itself, not from the identity
    used by :func:`shell_potential_numeric`.
    """
    sol = shell_potential_numeric(exp, r1, r2, R, n_cells)
    g = sol.grid
    mid = 0.5 * (g.nodes[:-1] + g.nodes[1:])
    in_shell = ((mid > r1) & (mid < r2)).astype(float)
    mass = integrate_power(exp.N, g.nodes, g.values, 1.0, in_shell)
    energy = p_energy(exp.N, exp.p, g.nodes, g.values)
    return exp.p * math.log(mass) - math.log(energy), g


def _mass_density(nodes, values, q):
    def dens(x):
        u = np.interp(x.ravel(), nodes, values).reshape(x.shape)
        return np.abs(u) ** (q - 1.0)
    return dens


def rayleigh_radial(N: int, p: float, q: float, radius: float = 1.0,
                    n_cells: int = 4096, tol: float = 1e-12, max_iter: int = 100000,
                    nodes=None):
    """First radial eigenvalue ``min int |v'|^p / (int |v|^q)^{p/q}`` on ``B_radius``.

    ``N = 1`` gives the symmetric interval ``(-radius, radius)``. Solved by the
    nonlinear inverse iteration ``u_{k+1} = argmin (1/p) E(u) - <|u_k|^{q-1}, u>``
    followed by normalization, which never increases the quotient. Returns
    ``(value, RadialGrid, SolveReport)``.
    """
    if p <= 1:
        raise ValueError("use the perimeter/volume quotient for p = 1")
    if nodes is None:
        nodes = mesh.uniform(0.0, radius, n_cells)
    u = 1.0 - nodes / radius
    prev = math.inf
    for it in range(1, max_iter + 1):
        loads = hat_loads(N, nodes, _mass_density(nodes, u, q))
        sol = flux_solve(N, p, nodes, loads)
        w = np.exp(sol.log_values - sol.log_values[0])
        w /= integrate_power(N, nodes, w, q) ** (1.0 / q)
        val = p_energy(N, p, nodes, w)
        u = w
        if abs(prev - val) <= tol * val:
            return val, RadialGrid(nodes, u), SolveReport(val, it, abs(prev - val) / val, True, tol)
        prev = val
    raise SolverError("inverse iteration did not converge",
                      SolveReport(prev, max_iter, math.inf, False, tol))


def radial_lambda_p_ball(exp: Exponents, n_cells: int = 4096, tol: float = 1e-12,
                         q=None, radius: float = 1.0) -> float:
    """Discrete upper bound on ``lambda_{p,q}(B_radius)`` (``q`` defaults to ``p``).

    For ``p = 1`` the value is the minimal perimeter/volume ratio over the
    concentric balls ``B_t``, ``t <= radius``, scanned on the mesh radii.
    """
    N, p = exp.N, exp.p
    q = p if q is None else q
    if n_cells < 16:
        raise ValueError("n_cells must be at least 16")
    if p == 1.0:
        t = mesh.uniform(0.0, radius, n_cells)[1:]
        ratio = N * unit_ball_volume(N) * t ** (N - 1) / (unit_ball_volume(N) * t ** N)
        return float(ratio.min())
    return rayleigh_radial(N, p, q, radius, n_cells, tol)[0]
