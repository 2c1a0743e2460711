"""Exact-arithmetic workbench for pentagon X-ray ambiguity."""

from xraypent.polycore import MultiPoly, MonomialOrder, format_poly, parse_poly

__all__ = ["MultiPoly", "MonomialOrder", "format_poly", "parse_poly"]
__version__ = "0.1.0"
