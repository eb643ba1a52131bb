"""Planar grid solver for p-Dirichlet energies of obstacle problems.

Unknowns live at the centers of an ``n x n`` array of square cells. The
centers are the vertices of a structured triangulation: every square of four
neighbouring centers is split along both diagonals and the two piecewise
linear energies are averaged, which removes the directional bias of a single
split while each split stays a conforming P1 function. Cells are tagged
FREE, OBSTACLE (pinned to 1) or BOUNDARY (pinned to 0); FREE cells on the
edge of the array get the natural (Neumann) condition.

The convex energy is minimized by damped Newton on the smoothed density
``(|g|^2 + eps^2)^{p/2}`` with eps continuation; its Hessian is positive
definite for every ``p > 1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from .core import (AnnulusGeometry, CapacityValue, Exponents, Method, SolveReport,
                   SolverError, Status)


class CellTag(enum.IntEnum):
    FREE = 0
    OBSTACLE = 1
    BOUNDARY = 2


@dataclass
class GridField2D:
    """Cell-centered field on the box ``[x0, x0 + n h] x [y0, y0 + n h]``."""

    n: int
    h: float
    origin: tuple = (0.0, 0.0)
    values: Optional[np.ndarray] = None
    mask: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.values is None:
            self.values = np.zeros((self.n, self.n))
        if self.mask is None:
            self.mask = np.full((self.n, self.n), CellTag.FREE, dtype=np.int8)

    def centers(self):
        c = (np.arange(self.n) + 0.5) * self.h
        return np.meshgrid(self.origin[0] + c, self.origin[1] + c, indexing="ij")

    def pinned_values(self) -> np.ndarray:
        out = np.where(self.mask == CellTag.OBSTACLE, 1.0, 0.0)
        return out

    def nearest_cell(self, point) -> tuple:
        i = int(np.clip(np.floor((point[0] - self.origin[0]) / self.h), 0, self.n - 1))
        j = int(np.clip(np.floor((point[1] - self.origin[1]) / self.h), 0, self.n - 1))
        return i, j

    def copy(self) -> "GridField2D":
        return GridField2D(self.n, self.h, self.origin, self.values.copy(), self.mask.copy())


# --------------------------------------------------------------------------- #
# geometry builders

def ball_box(n: int, R: float, center=(0.0, 0.0)) -> GridField2D:
    """Field on the square circumscribing ``B_R(center)``; cells with ``|x| >= R`` are BOUNDARY."""
    h = 2.0 * R / n
    f = GridField2D(n, h, (center[0] - R, center[1] - R))
    X, Y = f.centers()
    f.mask[np.hypot(X - center[0], Y - center[1]) >= R] = CellTag.BOUNDARY
    return f


def unit_square(n: int) -> GridField2D:
    """Dirichlet unit square: ``n + 1`` centers per side placed at ``k / n``.

    The edge centers sit exactly on the boundary of ``(0,1)^2`` and are pinned
    to zero, so the P1 functions are supported in the closed square.
    """
    h = 1.0 / n
    f = GridField2D(n + 1, h, (-h / 2, -h / 2))
    f.mask[[0, -1], :] = CellTag.BOUNDARY
    f.mask[:, [0, -1]] = CellTag.BOUNDARY
    return f


def perforated_cell(n: int, eps: float) -> GridField2D:
    """Periodicity cell ``[-1/2, 1/2]^2`` with the hole ``B_eps`` marked BOUNDARY.

    The edges keep natural conditions, which for the symmetric first mode of
    the periodic problem is the same as periodicity. The cell containing the
    origin is always pinned so that holes below the resolution are seen.
    """
    if n % 2 == 0:
        raise ValueError("use an odd n so that a cell is centered on the hole")
    f = GridField2D(n, 1.0 / n, (-0.5, -0.5))
    X, Y = f.centers()
    f.mask[np.hypot(X, Y) <= eps] = CellTag.BOUNDARY
    f.mask[n // 2, n // 2] = CellTag.BOUNDARY
    return f


def add_obstacle(field_: GridField2D, predicate: Optional[Callable] = None,
                 points: Sequence = ()) -> GridField2D:
    """Mark OBSTACLE cells: centers inside ``predicate`` and the cells nearest to ``points``."""
    if predicate is not None:
        X, Y = field_.centers()
        inside = np.asarray(predicate(X, Y), dtype=bool) & (field_.mask == CellTag.FREE)
        field_.mask[inside] = CellTag.OBSTACLE
    for pt in points:
        i, j = field_.nearest_cell(pt)
        if field_.mask[i, j] == CellTag.BOUNDARY:
            raise ValueError(f"point {pt!r} is not strictly inside the box")
        field_.mask[i, j] = CellTag.OBSTACLE
    return field_


# --------------------------------------------------------------------------- #
# discrete gradients

@lru_cache(maxsize=8)
def gradient_operators(n: int, h: float):
    """Sparse maps from nodal values to the four triangle gradients of each square.

    Returns ``(Dx, Dy, weight)``: the averaged energy is
    ``weight * sum |(Dx u, Dy u)|^p`` with ``weight = h^2 / 4``.
    """
    m = n - 1
    idx = np.arange(n * n).reshape(n, n)
    a = idx[:-1, :-1].ravel()
    b = idx[1:, :-1].ravel()   # +x
    c = idx[:-1, 1:].ravel()   # +y
    d = idx[1:, 1:].ravel()
    # (x-pair, y-pair) of each triangle; differences are (hi - lo)/h
    tri = [((a, b), (b, d)), ((c, d), (a, c)), ((a, b), (a, c)), ((c, d), (b, d))]
    rows = np.arange(4 * m * m).reshape(4, m * m)

    def build(pairs):
        r = np.concatenate([rows[k] for k in range(4)] * 2)
        cols = np.concatenate([pairs[k][1] for k in range(4)] + [pairs[k][0] for k in range(4)])
        vals = np.concatenate([np.full(m * m, 1.0 / h)] * 4 + [np.full(m * m, -1.0 / h)] * 4)
        return sp.csr_matrix((vals, (r, cols)), shape=(4 * m * m, n * n))

    Dx = build([t[0] for t in tri])
    Dy = build([t[1] for t in tri])
    return Dx, Dy, h * h / 4.0


def p_energy_2d(field_: GridField2D, p: float, values=None) -> float:
    u = (field_.values if values is None else values).ravel()
    Dx, Dy, w = gradient_operators(field_.n, field_.h)
    gx, gy = Dx @ u, Dy @ u
    return float(w * np.sum((gx * gx + gy * gy) ** (p / 2)))


# --------------------------------------------------------------------------- #
# Newton minimizer

EPS_SCHEDULE = tuple(10.0 ** (-k) for k in range(2, 11))


@dataclass
class _Problem:
    Dx: sp.csr_matrix
    Dy: sp.csr_matrix
    w: float
    p: float
    free: np.ndarray
    loads: np.ndarray
    DxF: sp.csr_matrix = field(init=False)
    DyF: sp.csr_matrix = field(init=False)

    def __post_init__(self):
        self.DxF = self.Dx[:, self.free].tocsr()
        self.DyF = self.Dy[:, self.free].tocsr()

    def objective(self, u, eps):
        gx, gy = self.Dx @ u, self.Dy @ u
        return float(self.w * np.sum((gx * gx + gy * gy + eps * eps) ** (self.p / 2)) / self.p
                     - self.loads @ u)

    def derivatives(self, u, eps):
        p = self.p
        gx, gy = self.Dx @ u, self.Dy @ u
        s = gx * gx + gy * gy + eps * eps
        s1 = s ** (p / 2 - 1)
        grad = self.w * (self.DxF.T @ (s1 * gx) + self.DyF.T @ (s1 * gy)) - self.loads[self.free]
        s2 = (p - 2.0) * s ** (p / 2 - 2) if p != 2 else np.zeros_like(s)
        A = self.w * (s1 + s2 * gx * gx)
        B = self.w * (s2 * gx * gy)
        C = self.w * (s1 + s2 * gy * gy)
        H = (self.DxF.T @ sp.diags(A) @ self.DxF + self.DxF.T @ sp.diags(B) @ self.DyF
             + self.DyF.T @ sp.diags(B) @ self.DxF + self.DyF.T @ sp.diags(C) @ self.DyF)
        return grad, H.tocsc()


def minimize_energy(field_: GridField2D, p: float, loads=None, tol: float = 1e-8,
                    init=None, max_iter: int = 100000, slope_scale: float = 1.0):
    """Minimize ``(1/p) E(u) - <loads, u>`` with OBSTACLE/BOUNDARY cells pinned.

    Returns ``(values, SolveReport)``. ``loads`` are nodal weights (already
    multiplied by the cell area). Pinned cells keep their values exactly.
    """
    n, h = field_.n, field_.h
    Dx, Dy, w = gradient_operators(n, h)
    mask = field_.mask.ravel()
    free = np.flatnonzero(mask == CellTag.FREE)
    pinned = field_.pinned_values().ravel()
    L = np.zeros(n * n) if loads is None else np.asarray(loads, dtype=float).ravel()
    prob = _Problem(Dx, Dy, w, p, free, L)
    u = pinned.copy()
    if init is not None:
        u[free] = np.asarray(init, dtype=float).ravel()[free]
    it = 0
    E0 = E1 = prob.objective(u, EPS_SCHEDULE[0] * slope_scale)
    decrement = math.inf
    # p = 2 is quadratic: the smoothing is irrelevant and one stage suffices
    schedule = (0.0,) if p == 2 else EPS_SCHEDULE
    for eps_rel in schedule:
        eps = eps_rel * slope_scale
        E1 = prob.objective(u, eps)
        for _ in range(100):
            it += 1
            if it > max_iter:
                raise SolverError("grid Newton exhausted its iteration budget",
                                  SolveReport(E1, it, decrement, False, tol))
            grad, H = prob.derivatives(u, eps)
            step = spsolve(H, -grad)
            slope = float(grad @ step)
            E0 = E1
            t = 1.0
            while True:
                trial = u.copy()
                trial[free] += t * step
                E1 = prob.objective(trial, eps)
                if E1 <= E0 + 1e-4 * t * slope or t < 1e-12:
                    break
                t *= 0.5
            u = trial
            decrement = abs(E0 - E1) / max(abs(E1), 1e-300)
            if decrement <= tol:
                break
    report = SolveReport(E1, it, decrement, decrement <= tol, tol)
    return u.reshape(n, n), report


# --------------------------------------------------------------------------- #
# public operations

def _box_field(box: AnnulusGeometry, n: int) -> GridField2D:
    center = box.center if box.center else (0.0, 0.0)
    return ball_box(n, box.R, center)


def grid_capacity_2d(exp: Exponents, obstacle, box: AnnulusGeometry, n: int = 256,
                     tol: float = 1e-8, return_field: bool = False):
    """Discrete p-capacity of an obstacle relative to the disk ``B_R`` of ``box``.

    ``obstacle`` is a predicate ``f(X, Y) -> bool array`` evaluated at cell
    centers, a list of points (each snapped to its nearest cell) or a
    pre-built :class:`GridField2D` mask. The grid is planar whatever
    ``exp.N`` says about the continuum problem it stands in for.
    """
    p = exp.p
    if p <= 1:
        raise ValueError("grid capacities need p > 1")
    if isinstance(obstacle, GridField2D):
        fld = obstacle.copy()
    else:
        fld = _box_field(box, n)
        if callable(obstacle):
            add_obstacle(fld, predicate=obstacle)
        else:
            add_obstacle(fld, points=list(obstacle))
    if not np.any(fld.mask == CellTag.OBSTACLE):
        out = CapacityValue(0.0, Method.NUMERIC, tol, Status.CAPACITY_NULL)
        return (out, fld) if return_field else out
    # linear warm start (p = 2), then the p problem
    init, _ = minimize_energy(fld, 2.0, tol=1e-12) if p != 2 else (None, None)
    if p == 2:
        vals, rep = minimize_energy(fld, 2.0, tol=tol)
    else:
        vals, rep = minimize_energy(fld, p, tol=tol, init=init, slope_scale=1.0 / box.R)
    if not rep.converged:
        raise SolverError("grid capacity solve did not converge", rep)
    if vals.min() < -1e-9 or vals.max() > 1 + 1e-9:
        raise SolverError("discrete maximum principle violated", rep)
    fld.values = vals
    cap = CapacityValue(p_energy_2d(fld, p), Method.NUMERIC, tol)
    return (cap, fld) if return_field else cap


def capacity_error_band(exp: Exponents, obstacle, box: AnnulusGeometry, n: int,
                        tol: float = 1e-8):
    """``(cap(n), |cap(n) - cap(n/2)|)``: value with a refinement error band."""
    fine = grid_capacity_2d(exp, obstacle, box, n, tol).value
    coarse = grid_capacity_2d(exp, obstacle, box, max(n // 2, 8), tol).value
    return fine, abs(fine - coarse)


def rayleigh_quotient_2d(exp: Exponents, domain: GridField2D, q: Optional[float] = None,
                         tol: float = 1e-8, max_iter: int = 500, return_field: bool = False):
    """Discrete ``min sum h^2 |grad u|^p / (sum h^2 |u|^q)^{p/q}`` with u = 0 on pinned cells.

    The norm uses the lumped (cell-sum) quadrature. Solved by nonlinear
    inverse iteration from the positive distance-like bump, renormalizing
    in the discrete L^q norm after each step.
    """
    p = exp.p
    q = p if q is None else q
    if p <= 1 or q < 1:
        raise ValueError("need p > 1 and q >= 1")
    fld = domain.copy()
    fld.mask[fld.mask == CellTag.OBSTACLE] = CellTag.BOUNDARY
    area = fld.h * fld.h
    free = fld.mask == CellTag.FREE
    u = _initial_bump(fld)
    prev = math.inf
    for k in range(1, max_iter + 1):
        loads = area * np.abs(u) ** (q - 1.0)
        u, rep = minimize_energy(fld, p, loads=loads, tol=1e-12, init=u)
        u = np.where(free, np.abs(u), 0.0)
        u /= (area * np.sum(u ** q)) ** (1.0 / q)
        val = p_energy_2d(fld, p, u)
        if abs(prev - val) <= tol * val:
            fld.values = u
            return (val, fld) if return_field else val
        prev = val
    raise SolverError("2D inverse iteration did not converge",
                      SolveReport(prev, max_iter, math.inf, False, tol))


def _initial_bump(fld: GridField2D) -> np.ndarray:
    """Positive start: graph distance to the pinned cells, capped at the box scale."""
    from scipy.ndimage import distance_transform_edt
    pinned = fld.mask != CellTag.FREE
    if not np.any(pinned):
        return np.ones((fld.n, fld.n))
    d = distance_transform_edt(~pinned) * fld.h
    return d / d.max()
