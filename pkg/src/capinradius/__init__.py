"""Numerical potential theory for the capacitary inradius and sharp L^p Poincare constants."""

from .core import (AnnulusGeometry, CapacityValue, Exponents, Method, Modulus, Regime,
                   SolveReport, SolverError, Status)
from .exact import (cap_ball, cap_ball_value, cap_point, gamma0, grotzsch_gap,
                    isocap_lower_bound, p_modulus, unit_ball_volume)
from .constants import BoundConfig, epsilon0, sigma_lower_constant, upper_constant
from .inradius import (DomainKind, DomainSpec, InradiusBracket, NegligibilityVerdict, Verdict,
                       capacitary_inradius, negligibility_test, slab_threshold)
from .geometry import phi_N

__version__ = "0.1.0"

__all__ = [
    "AnnulusGeometry", "CapacityValue", "Exponents", "Method", "Modulus", "Regime",
    "SolveReport", "SolverError", "Status",
    "cap_ball", "cap_ball_value", "cap_point", "gamma0", "grotzsch_gap", "isocap_lower_bound",
    "p_modulus", "unit_ball_volume",
    "BoundConfig", "epsilon0", "sigma_lower_constant", "upper_constant",
    "DomainKind", "DomainSpec", "InradiusBracket", "NegligibilityVerdict", "Verdict",
    "capacitary_inradius", "negligibility_test", "slab_threshold", "phi_N",
]
