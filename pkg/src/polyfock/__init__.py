"""Polyanalytic Fock spaces, their bases and transforms, and Berezin-Toeplitz quantization."""

from .cpoly import CPolynomial, DiffOp, anti_wick, apply_diff, heat_flow, try_divide
from .errors import PolyfockError
from .expr import format_poly, parse_poly
from .fockbasis import hermite, phi_jk, phi_k

__all__ = [
    "CPolynomial",
    "DiffOp",
    "PolyfockError",
    "anti_wick",
    "apply_diff",
    "format_poly",
    "heat_flow",
    "hermite",
    "parse_poly",
    "phi_jk",
    "phi_k",
    "try_divide",
]

__version__ = "0.1.0"
