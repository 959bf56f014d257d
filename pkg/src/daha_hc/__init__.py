"""Nonsymmetric Macdonald polynomials, global spherical functions and
their Harish-Chandra type asymptotic decompositions, in exact arithmetic."""
from .errors import (
    DahaError, InsufficientCutoffError, NonGenericError, ParameterError, PoleError,
    RootSystemError,
)
from .macdonald import (
    duality_gap, e_poly, e_polynomial, evaluation_product, symmetric_P,
)
from .polyring import LaurentPoly, ParamSpec, SpectralPoint
from .qseries import TruncatedValue, mu_ct_product, sigma_value, theta_value
from .rootdata import RootSystemData, build_root_system
from .spherical import Cutoffs, IdentityReport, g_value, psi_value

__version__ = "0.1.0"

__all__ = [
    "DahaError", "InsufficientCutoffError", "NonGenericError", "ParameterError", "PoleError",
    "RootSystemError", "duality_gap", "e_poly", "e_polynomial", "evaluation_product",
    "symmetric_P", "LaurentPoly", "ParamSpec", "SpectralPoint", "TruncatedValue",
    "mu_ct_product", "sigma_value", "theta_value", "RootSystemData", "build_root_system",
    "Cutoffs", "IdentityReport", "g_value", "psi_value",
]
