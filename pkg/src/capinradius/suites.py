"""Randomized property suites, shared by the ``verify`` command and the tests.

Every suite takes a ``numpy.random.Generator`` and a sample count and returns
a :class:`SuiteResult`; the outcome depends only on the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict

import numpy as np

from .constants import asymptotics_check, epsilon0, selection_margin, upper_constant
from .core import AnnulusGeometry, Exponents
from .exact import cap_ball_value, cap_point, gamma0, log_grotzsch_gap
from .shell import handy_shell_bound, normalized_sharp_constant, rough_shell_bound

#: relative slack for inequalities between closed forms
REL_SLACK = 1e-12


@dataclass
class SuiteResult:
    name: str
    samples: int
    failures: int
    worst: float
    details: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {"name": self.name, "samples": self.samples, "failures": self.failures,
                "worst": self.worst, "ok": self.ok, "details": self.details}


def random_exponents(rng: np.random.Generator, dims=(2, 3, 4), p_eq_N: float = 0.1) -> Exponents:
    """``N`` from ``dims`` and ``p`` in ``(1, N]``; ``p = N`` with probability ``p_eq_N``."""
    N = int(rng.choice(dims))
    if rng.random() < p_eq_N:
        return Exponents(N, float(N))
    return Exponents(N, 1.0 + (N - 1.0) * (1.0 - rng.random()))


def random_shell(rng: np.random.Generator, R_max: float = 10.0):
    """``0 < r1 < r2 < R <= R_max`` drawn from sorted uniforms."""
    while True:
        R = R_max * (1.0 - rng.random())
        r1, r2 = np.sort(rng.random(2)) * R
        if 0 < r1 < r2 < R:
            return float(r1), float(r2), float(R)


def grotzsch_suite(rng: np.random.Generator, samples: int = 1000) -> SuiteResult:
    """Quantified monotonicity ``lhs <= rhs`` of the p-modulus, compared in relative terms."""
    fails, worst = 0, -math.inf
    for _ in range(samples):
        exp = random_exponents(rng)
        r1, r2, R = random_shell(rng)
        log_lhs, log_rhs = log_grotzsch_gap(exp, r1, r2, R)
        excess = math.expm1(log_lhs - log_rhs)
        worst = max(worst, excess)
        fails += excess > REL_SLACK
    return SuiteResult("grotzsch", samples, fails, worst)


def shell_order_suite(rng: np.random.Generator, samples: int = 200) -> SuiteResult:
    """``normalized sharp <= handy <= rough`` on random shells."""
    fails, worst = 0, -math.inf
    for _ in range(samples):
        exp = random_exponents(rng)
        r1, r2, R = random_shell(rng)
        a = normalized_sharp_constant(exp, r1, r2, R)
        b = handy_shell_bound(exp, r1, r2, R)
        c = rough_shell_bound(exp, r1, R)
        excess = max((a - b) / b, (b - c) / c)
        worst = max(worst, excess)
        fails += excess > REL_SLACK
    return SuiteResult("shell-order", samples, fails, worst)


def eps0_suite(rng: np.random.Generator, samples: int = 100) -> SuiteResult:
    """The selection inequality holds at ``eps0`` (including the ``p = 1`` and ``p = N`` branches)."""
    fails, worst = 0, math.inf
    for k in range(samples):
        N = int(rng.choice((2, 3, 4)))
        branch = k % 4
        if branch == 0:
            p = 1.0
        elif branch == 1:
            p = float(N)
        else:
            p = 1.0 + (N - 1.0) * (1.0 - rng.random())
        exp = Exponents(N, p)
        gamma = float(0.001 + 0.998 * rng.random())
        m = selection_margin(exp, gamma, epsilon0(exp, gamma))
        worst = min(worst, m)
        fails += m < -REL_SLACK
    return SuiteResult("eps0", samples, fails, worst)


def asymptotics_suite(rng: np.random.Generator, samples: int = 0) -> SuiteResult:
    """``(1-gamma) C_{N,1,gamma} -> 8N`` and stabilization of ``(1-gamma)^{2p} C``."""
    fails, details, worst = 0, [], 0.0
    for N in (2, 3, 4):
        g = 1.0 - 1e-9
        val = (1.0 - g) * upper_constant(Exponents(N, 1.0), g)
        err = abs(val - 8 * N) / (8 * N)
        details.append({"N": N, "p": 1.0, "scaled": val, "target": 8.0 * N})
        worst = max(worst, err)
        fails += err > 1e-6
    for N, p in ((3, 2.0), (2, 2.0), (4, 3.0)):
        rep = asymptotics_check(Exponents(N, p))
        details.append({"N": N, "p": p, "ratios": rep.ratios, "bounded": rep.bounded})
        worst = max(worst, abs(rep.ratios[-1] - 1.0))
        fails += not rep.bounded
    return SuiteResult("asymptotics", len(details), fails, worst, details)


def superconformal_suite(rng: np.random.Generator, samples: int = 100) -> SuiteResult:
    """``gamma0`` formula against ``cap_point / cap_ball``; the ``(2, 4)`` value exactly."""
    fails, worst = 0, 0.0
    exact = 0.25 * (2.0 ** (2.0 / 3.0) - 1.0) ** 3
    err = abs(gamma0(Exponents(2, 4.0)) - exact)
    fails += err > 1e-12
    worst = err
    for _ in range(samples):
        N = int(rng.choice((2, 3, 4)))
        exp = Exponents(N, N + 10.0 * (1.0 - rng.random()))
        r = float(10.0 * (1.0 - rng.random()))
        ratio = cap_point(exp, 2 * r).value / cap_ball_value(N, exp.p, r, 2 * r)
        e = abs(ratio - gamma0(exp)) / gamma0(exp)
        worst = max(worst, e)
        fails += e > 1e-12
    return SuiteResult("superconformal", samples + 1, fails, worst)


def capacity_suite(rng: np.random.Generator, samples: int = 20) -> SuiteResult:
    """Radial variational capacity against the closed form (relative 1e-4)."""
    from .radial import radial_capacity
    fails, worst = 0, 0.0
    for _ in range(samples):
        exp = random_exponents(rng)
        R = float(10.0 * (1.0 - rng.random()))
        r = float(R * (1.0 - rng.random()))
        if not r < R:
            continue
        num, _, _ = radial_capacity(exp, AnnulusGeometry(r, R), 4096)
        ref = cap_ball_value(exp.N, exp.p, r, R)
        e = abs(num.value - ref) / ref
        worst = max(worst, e)
        fails += e > 1e-4
    return SuiteResult("capacity", samples, fails, worst)


SUITES: Dict[str, Callable] = {
    "grotzsch": grotzsch_suite,
    "shell-order": shell_order_suite,
    "eps0": eps0_suite,
    "asymptotics": asymptotics_suite,
    "superconformal": superconformal_suite,
    "capacity": capacity_suite,
}

#: suites whose size is fixed by their cost or their definition
FIXED_SIZE = ("asymptotics", "capacity")

DEFAULT_SAMPLES = {"grotzsch": 1000, "shell-order": 200, "eps0": 100, "asymptotics": 0,
                   "superconformal": 100, "capacity": 20}


def run_suites(names, seed: int, samples=None):
    """Run suites in order, each with its own generator derived from ``seed``.

    ``samples`` overrides the default size except for the suites in ``FIXED_SIZE``.
    """
    out = []
    for k, name in enumerate(names):
        rng = np.random.default_rng([seed, k])
        n = DEFAULT_SAMPLES[name] if samples is None or name in FIXED_SIZE else samples
        out.append(SUITES[name](rng, n))
    return out
