"""Exact computation of Kodaira dimensions of manifolds of dimension at most four."""
from .errors import ConsistencyError, KodlibError, UniquenessViolation, UnsupportedError, ValidationError
from .kodaira_low import KodDim, QDivisor, SeifertData, kappa_number

__all__ = [
    "ConsistencyError",
    "KodDim",
    "KodlibError",
    "QDivisor",
    "SeifertData",
    "UniquenessViolation",
    "UnsupportedError",
    "ValidationError",
    "kappa_number",
]
