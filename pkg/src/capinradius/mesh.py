"""Radial meshes graded toward steep boundary layers.

Radial p-harmonic profiles behave like ``rho**(-a)`` with
``a = (N - p)/(p - 1)``, so for ``p`` close to 1 they collapse into a layer of
width ``~ r/a`` next to the inner sphere. A uniform mesh wastes almost all of
its cells there. The helpers below equidistribute an exponential with a given
rate and blend the result with a uniform mesh so that no region is left
without cells.
"""

from __future__ import annotations

import numpy as np

BLEND = 0.2  # weight of the uniform component in every graded mesh


def graded_unit(n: int, K: float, blend: float = BLEND) -> np.ndarray:
    """Nodes on [0, 1] crowding at 0 for a layer ``exp(-K x)``.

    The node density is a mixture: a fraction ``blend`` of the cells is spread
    uniformly and the rest equidistributes ``exp(-K x)``. ``K = 0`` gives the
    uniform mesh. The cumulative cell count is inverted by vectorized
    bisection.
    """
    if n < 1:
        raise ValueError("need at least one cell")
    s = np.linspace(0.0, 1.0, n + 1)
    K = abs(float(K))
    if K < 1e-12:
        return s
    den = -np.expm1(-K)

    def count(x):
        return blend * x + (1.0 - blend) * (-np.expm1(-K * x)) / den

    lo, hi = np.zeros_like(s), np.ones_like(s)
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        below = count(mid) < s
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    x = 0.5 * (lo + hi)
    x[0], x[-1] = 0.0, 1.0
    return x


def graded_interval(a: float, b: float, n: int, rate: float, steep_end: str = "left",
                    blend: float = BLEND) -> np.ndarray:
    """Nodes on [a, b] graded toward ``steep_end`` for a layer of given rate."""
    if not b > a:
        raise ValueError("need b > a")
    x = graded_unit(n, rate * (b - a), blend)
    if steep_end == "left":
        out = a + (b - a) * x
    elif steep_end == "right":
        out = b - (b - a) * x[::-1]
    else:
        raise ValueError("steep_end must be 'left' or 'right'")
    out[0], out[-1] = a, b
    return out


def log_graded(r: float, R: float, n: int, rate: float, blend: float = BLEND) -> np.ndarray:
    """Nodes on [r, R] uniform-plus-graded in ``t = log(rho / r)``.

    ``rate`` is the decay exponent in ``t``; a positive rate crowds nodes at
    ``r``, a negative rate crowds them at ``R``.
    """
    T = np.log(R / r)
    side = "left" if rate >= 0 else "right"
    t = graded_interval(0.0, T, n, abs(rate), side, blend)
    rho = r * np.exp(t)
    rho[0], rho[-1] = r, R
    return rho


def uniform(a: float, b: float, n: int) -> np.ndarray:
    return np.linspace(a, b, n + 1)
