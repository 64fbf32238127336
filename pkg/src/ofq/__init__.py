"""Numerical toolkit for free orthogonal quantum groups O_F^+."""

from .errors import ConvergenceFailure, OFQError
from .fmatrix import CanonicalF, GroupParams, canonicalize, from_lambda, params, validate
from .polynomial import AnalyticPoly, adjoint, l2_norm, lp_equiv_norm
from .repdata import chebyshev_u, dim_table, quantum_dim

__version__ = "0.1.0"

__all__ = [
    "AnalyticPoly",
    "CanonicalF",
    "ConvergenceFailure",
    "GroupParams",
    "OFQError",
    "adjoint",
    "canonicalize",
    "chebyshev_u",
    "dim_table",
    "from_lambda",
    "l2_norm",
    "lp_equiv_norm",
    "params",
    "quantum_dim",
    "validate",
]
