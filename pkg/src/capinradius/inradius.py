"""(p, gamma)-negligibility tests and capacitary-inradius brackets.

A compact ``F`` inside the closed ball ``B_r(x0)`` is negligible when
``cap_p(F; B_2r(x0)) <= gamma cap_p(B_r; B_2r)``. Every verdict is decided
from a pair of bounds ``cap_lo <= cap(F) <= cap_hi``. Each pair comes from
closed forms, symmetrization, explicit test functions or (planar) grid
solves. A verdict that the bounds cannot settle is UNDECIDED. It widens the
final bracket instead of steering the bisection.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import optimize

from .core import AnnulusGeometry, CapacityValue, Exponents, Method, Regime, Status
from .exact import cap_ball_value, cap_point, gamma0, isocap_lower_bound, unit_ball_volume
from .geometry import ball_minus_ball, ball_outside_slab, intersection_volume, phi_N

#: relative slack for comparisons between closed forms that agree up to rounding
ROUND_SLACK = 1e-12
#: numeric verdicts need the margin to exceed this multiple of the error band
BAND_FACTOR = 3.0
MAX_DOUBLINGS = 60


class DomainKind(str, enum.Enum):
    SLAB = "slab"
    PUNCTURED_BALL = "punctured-ball"
    PERFORATED_LATTICE = "perforated-lattice"
    OBSTACLE_COMPLEMENT = "obstacle-complement"


@dataclass(frozen=True)
class DomainSpec:
    """Benchmark open set.

    * ``SLAB``: ``R^{N-1} x (-w, w)`` with ``w = size``;
    * ``PUNCTURED_BALL``: ``B_R minus {0}`` with ``R = size``;
    * ``PERFORATED_LATTICE``: ``R^N`` minus the closed balls ``B_eps(i)``,
      ``i`` in ``Z^N``, with ``eps = size`` in ``(0, 1/4)``;
    * ``OBSTACLE_COMPLEMENT``: the plane minus closed disks ``(x, y, radius)``;
      radius 0 is a point.
    """

    kind: DomainKind
    N: int
    size: float = 1.0
    obstacles: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", DomainKind(self.kind))
        if int(self.N) != self.N or self.N < 2:
            raise ValueError("N must be an integer >= 2")
        if self.kind is DomainKind.PERFORATED_LATTICE:
            if not (0 < self.size < 0.25):
                raise ValueError("lattice hole radius must lie in (0, 1/4)")
        elif self.kind is DomainKind.OBSTACLE_COMPLEMENT:
            if self.N != 2:
                raise ValueError("obstacle complements are planar (N = 2)")
            obs = tuple(tuple(float(v) for v in o) for o in self.obstacles)
            if any(len(o) != 3 or o[2] < 0 for o in obs):
                raise ValueError("obstacles are (x, y, radius) triples with radius >= 0")
            object.__setattr__(self, "obstacles", obs)
        elif not self.size > 0:
            raise ValueError("domain size must be positive")

    @classmethod
    def slab(cls, N: int, w: float = 1.0) -> "DomainSpec":
        return cls(DomainKind.SLAB, N, w)

    @classmethod
    def punctured_ball(cls, N: int, R: float = 1.0) -> "DomainSpec":
        return cls(DomainKind.PUNCTURED_BALL, N, R)

    @classmethod
    def perforated_lattice(cls, N: int, eps: float) -> "DomainSpec":
        return cls(DomainKind.PERFORATED_LATTICE, N, eps)

    @classmethod
    def obstacle_complement(cls, obstacles: Sequence) -> "DomainSpec":
        return cls(DomainKind.OBSTACLE_COMPLEMENT, 2, 1.0, tuple(obstacles))

    def classical_inradius(self) -> float:
        if self.kind is DomainKind.SLAB:
            return self.size
        if self.kind is DomainKind.PUNCTURED_BALL:
            return self.size / 2.0
        if self.kind is DomainKind.PERFORATED_LATTICE:
            return math.sqrt(self.N) / 2.0 - self.size
        return math.inf

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "N": self.N, "size": self.size,
                "obstacles": [list(o) for o in self.obstacles]}


class Verdict(str, enum.Enum):
    NEGLIGIBLE = "negligible"
    NOT_NEGLIGIBLE = "not-negligible"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class NegligibilityVerdict:
    verdict: Verdict
    cap_obstacle: CapacityValue
    cap_full: CapacityValue
    threshold: float
    cap_lo: float
    cap_hi: float
    margin: float

    @property
    def negligible(self) -> Optional[bool]:
        if self.verdict is Verdict.UNDECIDED:
            return None
        return self.verdict is Verdict.NEGLIGIBLE

    def to_dict(self) -> dict:
        return {"verdict": self.verdict.value, "cap_obstacle": self.cap_obstacle.to_dict(),
                "cap_full": self.cap_full.to_dict(), "threshold": self.threshold,
                "cap_lo": self.cap_lo, "cap_hi": self.cap_hi, "margin": self.margin}


@dataclass(frozen=True)
class InradiusBracket:
    lo: float
    hi: float
    gamma: float
    method: str
    notes: tuple = ()

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"inconsistent bracket lo={self.lo!r} > hi={self.hi!r}")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "gamma": self.gamma, "method": self.method,
                "notes": list(self.notes)}


@dataclass(frozen=True)
class _Bounds:
    lo: float
    hi: float
    strict: bool = False          # cap > lo is known to hold strictly
    band: float = 0.0             # numeric error band of a grid estimate
    method: Method = Method.CLOSED_FORM


def _check_gamma(gamma: float) -> None:
    if not (0.0 < gamma < 1.0):
        raise ValueError(f"gamma must lie in (0, 1), got {gamma!r}")


def _decide(b: _Bounds, full: float, gamma: float) -> NegligibilityVerdict:
    thr = gamma * full
    up, down = thr * (1 + ROUND_SLACK), thr * (1 - ROUND_SLACK)
    if b.band > 0:
        mid = 0.5 * (b.lo + b.hi)
        if mid + BAND_FACTOR * b.band <= thr:
            v, est = Verdict.NEGLIGIBLE, mid
        elif mid - BAND_FACTOR * b.band > thr:
            v, est = Verdict.NOT_NEGLIGIBLE, mid
        else:
            v, est = Verdict.UNDECIDED, mid
        tag = Method.NUMERIC
    elif b.hi <= up:
        v, est = Verdict.NEGLIGIBLE, b.hi
        tag = Method.CLOSED_FORM if b.lo == b.hi else Method.UPPER_BOUND
    elif b.lo > up or (b.strict and b.lo >= down):
        v, est = Verdict.NOT_NEGLIGIBLE, b.lo
        tag = Method.CLOSED_FORM if b.lo == b.hi else Method.LOWER_BOUND
    else:
        v, est = Verdict.UNDECIDED, 0.5 * (b.lo + b.hi)
        tag = Method.NUMERIC
    status = Status.CAPACITY_NULL if est == 0.0 else Status.OK
    return NegligibilityVerdict(v, CapacityValue(est, tag, b.band, status),
                                CapacityValue(full), thr, b.lo, b.hi, thr - est)


# --------------------------------------------------------------------------- #
# slab

def _cap_cover(N: int, p: float, r: float, c: float) -> float:
    """Capacity of the ball centered at ``c e_N`` covering the upper cap, in ``B_{2r-c}(c e_N)``."""
    rim = math.sqrt(r * r - 1.0)
    rad = max(math.hypot(rim, 1.0 - c), r - c)
    return cap_ball_value(N, p, rad, 2 * r - c)


def slab_cap_upper(exp: Exponents, r: float, w: float = 1.0) -> float:
    """Upper bound on ``cap_p(B_r minus slab; B_2r)`` for the centered ball.

    Each of the two caps outside the slab is covered by a ball centered on the
    axis at height ``c`` in ``[0, w]`` whose doubled box stays inside
    ``B_2r``; monotonicity and subadditivity give ``2 min_c cap(cover)``,
    capped by the capacity of the full ball.
    """
    N, p = exp.N, exp.p
    if r <= w:
        if r < w or p <= N:
            return 0.0
        return min(cap_ball_value(N, p, r, 2 * r), 2 * cap_point(exp, r).value)
    rn = r / w
    res = optimize.minimize_scalar(lambda c: _cap_cover(N, p, rn, c), bounds=(0.0, 1.0),
                                   method="bounded", options={"xatol": 1e-10})
    best = min(float(res.fun), _cap_cover(N, p, rn, 1.0))
    val = min(2.0 * best, cap_ball_value(N, p, rn, 2 * rn))
    return w ** (N - p) * val


def slab_lower_ratio(exp: Exponents, r: float) -> float:
    """Symmetrization lower bound on ``cap(B_r minus slab; B_2r) / cap(B_r; B_2r)`` (unit slab).

    Equals ``Phi^{N-p} cap(B_1; B_{2/Phi}) / cap(B_1; B_2)`` with ``Phi = Phi_N(r)``.
    """
    N, p = exp.N, exp.p
    if r <= 1:
        return 0.0
    vol = r ** N * unit_ball_volume(N) * phi_N(N, r) ** N
    full = cap_ball_value(N, p, r, 2 * r)
    return isocap_lower_bound(exp, vol, unit_ball_volume(N) * (2 * r) ** N) / full


def _slab_bounds(exp: Exponents, w: float, t: float, r: float) -> _Bounds:
    N, p = exp.N, exp.p
    t = abs(t)
    if t + r < w:
        return _Bounds(0.0, 0.0)
    full = cap_ball_value(N, p, r, 2 * r)
    vol = ball_outside_slab(N, r, t, w)
    if vol == 0.0:
        # the closed ball touches the slab boundary in one or two points
        if p <= N:
            return _Bounds(0.0, 0.0)
        two = r - t >= w
        return _Bounds(cap_point(exp, 2 * r).value, min(full, 2 * cap_point(exp, r).value),
                       strict=two, method=Method.LOWER_BOUND)
    lo = isocap_lower_bound(exp, vol, unit_ball_volume(N) * (2 * r) ** N)
    if p > N:
        lo = max(lo, cap_point(exp, 2 * r).value)
    hi = full
    if t == 0.0:
        hi = min(hi, slab_cap_upper(exp, r, w))
    return _Bounds(lo, hi, strict=p > N, method=Method.LOWER_BOUND)


# --------------------------------------------------------------------------- #
# punctured ball

def _punctured_bounds(exp: Exponents, R: float, d: float, r: float) -> _Bounds:
    N, p = exp.N, exp.p
    full = cap_ball_value(N, p, r, 2 * r)
    if d + R <= r:            # the hole sits inside the ball: the filled ball is the obstacle
        return _Bounds(full, full)
    has_origin = d <= r
    ext_volume = d + r > R
    tangent = d + r == R
    if not ext_volume:
        n_pts = int(has_origin) + int(tangent)
        if n_pts == 0 or p <= N:
            return _Bounds(0.0, 0.0)
        lo = cap_point(exp, 2 * r).value
        hi = 0.0
        if has_origin:
            hi += cap_point(exp, 2 * r - d).value
        if tangent:
            hi += cap_point(exp, r).value
        return _Bounds(lo, min(hi, full), strict=n_pts >= 2)
    vol = ball_minus_ball(N, r, R, d)
    lo = isocap_lower_bound(exp, vol, unit_ball_volume(N) * (2 * r) ** N)
    if p > N:
        lo = max(lo, cap_point(exp, 2 * r).value)
    return _Bounds(lo, full, strict=p > N, method=Method.LOWER_BOUND)


# --------------------------------------------------------------------------- #
# lattice and finite obstacles

def _lattice_points_near(c: np.ndarray, radius: float):
    lo = np.floor(c - radius).astype(int)
    hi = np.ceil(c + radius).astype(int)
    pts = np.array(list(itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)])), dtype=float)
    d = np.linalg.norm(pts - c, axis=1)
    keep = d <= radius
    return pts[keep], d[keep]


def _disk_union_bounds(exp: Exponents, r: float, items) -> _Bounds:
    """Bounds for ``closed B_r(c) cap (union of closed balls)``; ``items`` = (distance, radius)."""
    N, p = exp.N, exp.p
    full = cap_ball_value(N, p, r, 2 * r)
    box = unit_ball_volume(N) * (2 * r) ** N
    lo, hi, vol, n_pts = 0.0, 0.0, 0.0, 0
    for d, rad in items:
        if d > r + rad:
            continue
        if rad == 0.0 or d == r + rad:
            # a point (or a single contact point)
            n_pts += 1
            if p > N:
                hi += cap_point(exp, 2 * r - min(d + rad, r)).value
            continue
        v = intersection_volume(N, r, rad, d)
        vol += v
        if d + rad <= r:
            lo = max(lo, cap_ball_value(N, p, rad, 2 * r + d))
        else:
            lo = max(lo, isocap_lower_bound(exp, v, box))
        outer = 2 * r - d
        hi += cap_ball_value(N, p, rad, outer) if outer > rad else full
    if vol > 0:
        lo = max(lo, isocap_lower_bound(exp, min(vol, box), box))
    nonempty = vol > 0 or n_pts > 0
    strict = False
    if p > N and nonempty:
        lo = max(lo, cap_point(exp, 2 * r).value)
        strict = vol > 0 or n_pts >= 2
    if not nonempty:
        return _Bounds(0.0, 0.0)
    return _Bounds(lo, min(hi, full), strict=strict, method=Method.LOWER_BOUND)


def _obstacle_items(domain: DomainSpec, c: np.ndarray, r: float):
    if domain.kind is DomainKind.PERFORATED_LATTICE:
        pts, d = _lattice_points_near(c, r + domain.size)
        return pts, [(float(x), domain.size) for x in d]
    pts = np.array([o[:2] for o in domain.obstacles], dtype=float).reshape(-1, 2)
    rads = [o[2] for o in domain.obstacles]
    d = np.linalg.norm(pts - c, axis=1) if len(pts) else np.zeros(0)
    return pts, [(float(x), rad) for x, rad in zip(d, rads)]


def _grid_bounds(exp: Exponents, domain: DomainSpec, c: np.ndarray, r: float, n: int) -> _Bounds:
    from .grid2d import capacity_error_band
    pts, items = _obstacle_items(domain, c, r)
    disks = [(pt, rad) for pt, (d, rad) in zip(pts, items) if d <= r + rad and rad > 0]
    points = [tuple(pt) for pt, (d, rad) in zip(pts, items) if rad == 0 and d <= r]

    def inside(X, Y):
        mask = np.zeros(X.shape, dtype=bool)
        for pt, rad in disks:
            mask |= np.hypot(X - pt[0], Y - pt[1]) <= rad
        return mask & (np.hypot(X - c[0], Y - c[1]) <= r)

    from .grid2d import add_obstacle, ball_box
    fld = ball_box(n, 2 * r, tuple(c))
    add_obstacle(fld, inside, points if exp.p > 2 else ())
    fine, band = capacity_error_band(exp, fld, AnnulusGeometry(r, 2 * r, center=tuple(c)), n)
    return _Bounds(fine, fine, band=max(band, 1e-14 * fine), method=Method.NUMERIC)


# --------------------------------------------------------------------------- #
# public operations

def _center_array(domain: DomainSpec, center) -> np.ndarray:
    c = np.atleast_1d(np.asarray(center, dtype=float))
    if c.size == 1 and domain.N > 1:
        # scalar center: position along the symmetry axis
        out = np.zeros(domain.N)
        out[-1 if domain.kind is DomainKind.SLAB else 0] = c[0]
        return out
    if c.size != domain.N:
        raise ValueError(f"center must have {domain.N} coordinates")
    return c


def negligibility_test(domain: DomainSpec, center, r: float, exp: Exponents, gamma: float,
                       grid_n: Optional[int] = None) -> NegligibilityVerdict:
    """Decide whether ``closed B_r(center) minus Omega`` is ``(p, gamma)``-negligible.

    Planar lattice and obstacle complements fall back to a grid solve with
    ``grid_n`` cells per side when the analytic bounds leave the verdict open.
    """
    _check_gamma(gamma)
    if not r > 0:
        raise ValueError("r must be positive")
    if exp.N != domain.N:
        raise ValueError("dimension of the exponents and the domain differ")
    c = _center_array(domain, center)
    full = cap_ball_value(exp.N, exp.p, r, 2 * r)
    if domain.kind is DomainKind.SLAB:
        b = _slab_bounds(exp, domain.size, float(c[-1]), r)
    elif domain.kind is DomainKind.PUNCTURED_BALL:
        b = _punctured_bounds(exp, domain.size, float(np.linalg.norm(c)), r)
    else:
        _, items = _obstacle_items(domain, c, r)
        b = _disk_union_bounds(exp, r, items)
    verdict = _decide(b, full, gamma)
    if (verdict.verdict is Verdict.UNDECIDED and grid_n and exp.N == 2 and exp.p > 1
            and domain.kind in (DomainKind.PERFORATED_LATTICE, DomainKind.OBSTACLE_COMPLEMENT)):
        verdict = _decide(_grid_bounds(exp, domain, c, r, grid_n), full, gamma)
    return verdict


def _bisect(pred, a: float, b: float, rtol: float):
    """Shrink ``[a, b]`` with ``pred(a)`` False and ``pred(b)`` True until ``b - a <= rtol b``."""
    while b - a > rtol * b:
        m = 0.5 * (a + b)
        if pred(m):
            b = m
        else:
            a = m
    return a, b


def _transition(pred, start: float, rtol: float):
    """Bracket the first radius where ``pred`` turns True; ``(a, inf)`` if it never does."""
    a, b = 0.0, start
    for _ in range(MAX_DOUBLINGS):
        if pred(b):
            return _bisect(pred, a, b, rtol)
        a, b = b, 2 * b
    return a, math.inf


def _lattice_witness_centers(N: int, m: int = 9):
    axis = np.linspace(0.0, 0.5, m)
    return [np.array(c) for c in itertools.product(axis, repeat=N)]


def _witness(domain: DomainSpec, exp: Exponents, gamma: float, r: float) -> bool:
    """Some candidate center carries a certified negligible obstacle."""
    N = domain.N
    if domain.kind is DomainKind.SLAB:
        centers = [np.zeros(N)]
    elif domain.kind is DomainKind.PUNCTURED_BALL:
        R = domain.size
        ts = sorted(set(np.linspace(0.0, R, 33).tolist() + [R / 2]))
        centers = [np.eye(N)[0] * t for t in ts]
    else:
        centers = _lattice_witness_centers(N)
    return any(negligibility_test(domain, c, r, exp, gamma).verdict is Verdict.NEGLIGIBLE
               for c in centers)


def _universal(domain: DomainSpec, exp: Exponents, gamma: float, r: float) -> bool:
    """Certified: no center carries a negligible obstacle."""
    N, p = exp.N, exp.p
    full = cap_ball_value(N, p, r, 2 * r)
    thr = gamma * full * (1 + ROUND_SLACK)
    box = unit_ball_volume(N) * (2 * r) ** N
    if domain.kind is DomainKind.SLAB:
        # the centered ball leaves the least volume outside the slab
        w = domain.size
        if r <= w:
            return False
        vol = ball_outside_slab(N, r, 0.0, w)
        return isocap_lower_bound(exp, vol, box) > thr
    if domain.kind is DomainKind.PUNCTURED_BALL:
        R = domain.size
        if exp.regime is Regime.SUPERCONFORMAL:
            g0 = gamma0(exp)
            if gamma < g0 and r >= R / 2:
                return True       # every closed ball meets the complement
            if gamma <= g0 * (1 + ROUND_SLACK) and r >= R:
                return True       # at least two points: strictly above the point capacity
        if r > R:
            vol = unit_ball_volume(N) * (r ** N - R ** N)
            return isocap_lower_bound(exp, vol, box) > thr
        return False
    if domain.kind is DomainKind.PERFORATED_LATTICE:
        eps = domain.size
        reach = math.sqrt(N) / 2.0
        if exp.regime is Regime.SUPERCONFORMAL and gamma < gamma0(exp) and r >= reach - eps:
            return True
        if r < reach + eps:
            return False
        lo = cap_ball_value(N, p, eps, 2 * r + reach)
        inner = r - eps - math.sqrt(N)
        if inner > 0:
            count = math.ceil(unit_ball_volume(N) * inner ** N)
            vol = min(count * unit_ball_volume(N) * eps ** N, box)
            lo = max(lo, isocap_lower_bound(exp, vol, box))
        return lo > thr
    return False


def capacitary_inradius(domain: DomainSpec, exp: Exponents, gamma: float,
                        tol: float = 1e-4) -> InradiusBracket:
    """Bracket ``[lo, hi]`` for ``R_{p,gamma}(Omega)``.

    ``lo`` is the largest radius with a certified negligible witness found by
    bisection, ``hi`` the smallest radius past which no center can be
    negligible. ``hi = inf`` when no such certificate is available.
    """
    _check_gamma(gamma)
    if exp.N != domain.N:
        raise ValueError("dimension of the exponents and the domain differ")
    if domain.kind is DomainKind.OBSTACLE_COMPLEMENT:
        return InradiusBracket(math.inf, math.inf, gamma, "unbounded",
                               ("the complement of a bounded set contains arbitrarily large balls",))
    rtol = tol / 4.0
    scale = domain.size if domain.kind is not DomainKind.PERFORATED_LATTICE else 0.5
    notes = []
    lo, first_fail = _transition(lambda r: not _witness(domain, exp, gamma, r), scale, rtol)
    if first_fail is math.inf:
        return InradiusBracket(math.inf, math.inf, gamma, "unbounded",
                               ("negligible witnesses found at every tested radius",))
    lo_w = domain.classical_inradius()
    if domain.kind is DomainKind.SLAB and exp.p <= exp.N:
        lo_w = domain.size        # the closed ball touches the slab in two capacity-null points
    lo = max(lo, lo_w)
    _, hi = _transition(lambda r: _universal(domain, exp, gamma, r), max(lo, scale), rtol)
    if domain.kind is DomainKind.SLAB and exp.regime is Regime.SUBCONFORMAL:
        hi = min(hi, slab_threshold(exp, gamma) * domain.size)
    if hi is math.inf:
        notes.append("no non-negligibility certificate; upper end unbounded")
    hi = max(hi, lo)
    method = {DomainKind.SLAB: "slab-axis", DomainKind.PUNCTURED_BALL: "punctured-ball",
              DomainKind.PERFORATED_LATTICE: "lattice-cell"}[domain.kind]
    return InradiusBracket(lo, hi, gamma, method, tuple(notes))


# --------------------------------------------------------------------------- #
# slab threshold and degeneration

def slab_target(exp: Exponents, gamma: float) -> float:
    """``(2^a g / (2^a - 1 + g))^{(p-1)/(N-p)}`` with ``g = gamma^{1/(p-1)}``, a value in ``(0, 1)``."""
    _check_gamma(gamma)
    N, p = exp.N, exp.p
    if exp.regime is not Regime.SUBCONFORMAL:
        raise ValueError("the slab threshold needs 1 < p < N")
    a = (N - p) / (p - 1.0)
    lg = math.log(gamma) / (p - 1.0)
    log2a = a * math.log(2.0)
    # log(2^a - 1 + g) = log(2^a) + log1p((g - 1) / 2^a)
    log_den = log2a + math.log1p(-(-math.expm1(lg)) * math.exp(-log2a))
    return math.exp((log2a + lg - log_den) / a)


def slab_threshold(exp: Exponents, gamma: float, xtol: float = 1e-13) -> float:
    """Radius ``r_gamma`` with ``Phi_N(r_gamma) = slab_target`` (unit half-width)."""
    target = slab_target(exp, gamma)
    N = exp.N
    lo, hi = 1.0, 2.0
    for _ in range(MAX_DOUBLINGS):
        if phi_N(N, hi) >= target:
            break
        lo, hi = hi, 2 * hi
    else:
        raise ArithmeticError("slab threshold not bracketed")
    return optimize.brentq(lambda r: phi_N(N, r) - target, lo, hi, xtol=xtol, rtol=1e-15)


@dataclass(frozen=True)
class DegenerationPoint:
    r: float
    gamma_lo: float
    gamma_hi: float
    lower_bound_on_R: float

    @property
    def gamma_r(self) -> float:
        return self.gamma_lo


def slab_degeneration(exp: Exponents, r: float) -> DegenerationPoint:
    """Capacity ratio ``gamma_r`` of the centered ball for the unit slab, as a bracket.

    ``gamma_lo`` is the symmetrization bound and ``gamma_hi`` the explicit
    test-function bound. By definition ``B_r`` is ``gamma_r``-negligible,
    so ``R_{p, gamma_r} >= r``.
    """
    if exp.regime is not Regime.SUBCONFORMAL:
        raise ValueError("slab degeneration needs 1 < p < N")
    if not r > 1:
        raise ValueError("need r > 1")
    full = cap_ball_value(exp.N, exp.p, r, 2 * r)
    return DegenerationPoint(r, slab_lower_ratio(exp, r), slab_cap_upper(exp, r) / full, r)


# --------------------------------------------------------------------------- #
# perforated lattice and point capacities

def perforated_gamma_zero_inradius(N: int, eps: float) -> float:
    """Certified upper bound ``sqrt(N)/2`` on ``R_{p,0}`` of the perforated lattice."""
    if not (0 < eps < 0.25):
        raise ValueError("eps must lie in (0, 1/4)")
    return math.sqrt(N) / 2.0


def perforated_lambda_bound(exp: Exponents, eps: float) -> float:
    """``cap_p(B_eps; B_{1/2}) / |Q_{1/2} minus B_{1/2}|`` for the unit periodicity cell."""
    if not (0 < eps < 0.25):
        raise ValueError("eps must lie in (0, 1/4)")
    N = exp.N
    return cap_ball_value(N, exp.p, eps, 0.5) / (1.0 - unit_ball_volume(N) * 0.5 ** N)


@dataclass
class PointCapacityReport:
    caps: list
    bands: list
    n: int
    increasing: Optional[bool]
    gaps: list = field(default_factory=list)


def point_capacity_monotonicity_check(exp: Exponents, points: Sequence, R: float = 1.0,
                                      n: int = 512) -> PointCapacityReport:
    """Grid capacities of the nested point sets ``{x_1..x_k}``, ``k = 1..len(points)``.

    The sequence must increase strictly with gaps above ``3x`` the combined
    refinement bands; when a gap is inside the band the check is repeated
    once on a grid twice as fine, and stays UNDECIDED (``None``) otherwise.
    """
    from .grid2d import capacity_error_band
    if exp.N != 2 or not exp.p > 2:
        raise ValueError("point capacities on the grid need N = 2 and p > 2")
    pts = [tuple(map(float, x)) for x in points]
    if any(math.hypot(*x) >= R for x in pts):
        raise ValueError("points must lie strictly inside B_R")
    box = AnnulusGeometry(R / 2, R)

    def run(m):
        caps, bands = [0.0], [0.0]
        for k in range(1, len(pts) + 1):
            c, b = capacity_error_band(exp, pts[:k], box, m)
            caps.append(c)
            bands.append(b)
        gaps = [caps[k] - caps[k - 1] for k in range(1, len(caps))]
        ok = all(g > BAND_FACTOR * (bands[k] + bands[k + 1]) for k, g in enumerate(gaps))
        return caps, bands, gaps, ok

    caps, bands, gaps, ok = run(n)
    if not ok:
        n = 2 * n
        caps, bands, gaps, ok = run(n)
    increasing = True if ok else (False if any(g <= 0 for g in gaps) else None)
    return PointCapacityReport(caps, bands, n, increasing, gaps)
