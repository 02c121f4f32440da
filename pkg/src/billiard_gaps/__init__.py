"""Minimal gaps in the spectrum {alpha m^2 + n^2} of the rectangular billiard.

Exact quadratic-surd arithmetic, spectrum enumeration, continued fractions,
Chebyshev strong divisibility sequences, gap certificates and Poisson
baselines.
"""

from .construct import (
    GapCertificate,
    GeneralQuadraticSpec,
    construct_from_approximant,
    construct_general,
    construct_sqrtD,
    construct_strong_exact,
    general_upper_bound,
)
from .exact import QuadSurd, parse_alpha
from .spectrum import enumerate_spectrum, min_gap, scaled_gap_sweep

__version__ = "0.1.0"

__all__ = [
    "GapCertificate",
    "GeneralQuadraticSpec",
    "QuadSurd",
    "construct_from_approximant",
    "construct_general",
    "construct_sqrtD",
    "construct_strong_exact",
    "enumerate_spectrum",
    "general_upper_bound",
    "min_gap",
    "parse_alpha",
    "scaled_gap_sweep",
]
