"""Shared value types: exponent regimes, annulus geometry, tagged capacities."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple


class Regime(str, enum.Enum):
    P_EQ_1 = "p=1"
    SUBCONFORMAL = "1<p<N"
    CONFORMAL = "p=N"
    SUPERCONFORMAL = "p>N"


class Method(str, enum.Enum):
    CLOSED_FORM = "closed-form"
    NUMERIC = "numeric"
    LOWER_BOUND = "lower-bound"
    UPPER_BOUND = "upper-bound"


class Status(str, enum.Enum):
    OK = "ok"
    CAPACITY_NULL = "capacity-null"
    INFINITE = "infinite"
    FAILED = "failed"


@dataclass(frozen=True)
class Exponents:
    """Dimension ``N`` and exponent ``p``.

    The regime is decided by exact comparison: the conformal branch is only
    selected when ``p == N`` literally.
    """

    N: int
    p: float

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"dimension N must be an integer >= 2, got {self.N!r}")
        if not (self.p >= 1.0) or not math.isfinite(self.p):
            raise ValueError(f"exponent p must be a finite real >= 1, got {self.p!r}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "p", float(self.p))

    @property
    def regime(self) -> Regime:
        if self.p == 1.0:
            return Regime.P_EQ_1
        if self.p < self.N:
            return Regime.SUBCONFORMAL
        if self.p == self.N:
            return Regime.CONFORMAL
        return Regime.SUPERCONFORMAL

    @property
    def a(self) -> float:
        """Radial decay exponent (N-p)/(p-1) of p-harmonic functions."""
        return (self.N - self.p) / (self.p - 1.0)


@dataclass(frozen=True)
class AnnulusGeometry:
    """Inner radius ``r`` (or shell radii ``r1 < r2``) inside the box ball ``B_R``."""

    r: float
    R: float
    r1: Optional[float] = None
    r2: Optional[float] = None
    center: Tuple[float, ...] = ()

    def __post_init__(self):
        if not (self.r > 0):
            raise ValueError(f"inner radius must be positive, got r={self.r!r}")
        if not (self.r < self.R):
            raise ValueError(f"need r < R, got r={self.r!r}, R={self.R!r}")
        if (self.r1 is None) != (self.r2 is None):
            raise ValueError("shell radii r1, r2 must be given together")
        if self.r1 is not None:
            check_shell(self.r1, self.r2, self.R)


def check_shell(r1: float, r2: float, R: float) -> None:
    if not (0 < r1 < r2 < R):
        raise ValueError(f"need 0 < r1 < r2 < R, got r1={r1!r}, r2={r2!r}, R={R!r}")


@dataclass(frozen=True)
class CapacityValue:
    value: float
    method: Method = Method.CLOSED_FORM
    tol: float = 0.0
    status: Status = Status.OK

    def __post_init__(self):
        if self.value < 0 or math.isnan(self.value):
            raise ValueError(f"capacity must be a nonnegative number, got {self.value!r}")

    def __float__(self):
        return float(self.value)

    def to_dict(self) -> dict:
        return {"value": self.value, "method": self.method.value,
                "tol": self.tol, "status": self.status.value}


@dataclass(frozen=True)
class Modulus:
    """p-modulus ``cap^{-1/(p-1)}``; infinite (with status) for null capacity."""

    value: float
    status: Status = Status.OK


@dataclass
class SolveReport:
    energy: float
    iterations: int
    residual: float
    converged: bool
    tol: float = 0.0
    notes: list = field(default_factory=list)


class SolverError(RuntimeError):
    """Raised when an iterative solve exhausts its budget."""

    def __init__(self, message: str, report: Optional[SolveReport] = None):
        super().__init__(message)
        self.report = report
