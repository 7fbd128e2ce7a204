"""Exact computations in combinatorial Tsirelson spaces T[theta, S_alpha]."""

from .core import (
    ParseError,
    SignPattern,
    SparseVector,
    TsirelsonError,
    ZeroCoefficientError,
    ZeroVectorError,
    ell1_norm,
    flip_signs,
    format_vector,
    parse_vector,
    project,
    spread,
    sup_norm,
)
from .schreier import OMEGA, Ordinal, decompose, is_member, parse_ordinal

__version__ = "0.1.0"

__all__ = [
    "OMEGA", "Ordinal", "ParseError", "SignPattern", "SparseVector", "TsirelsonError",
    "ZeroCoefficientError", "ZeroVectorError", "decompose", "ell1_norm", "flip_signs",
    "format_vector", "is_member", "parse_ordinal", "parse_vector", "project", "spread",
    "sup_norm",
]
