"""Presburger arithmetic toolkit for linear orders interpreted in (N, +)."""

from .formula import parse, format_formula, evaluate, substitute
from .qelim import eliminate, decide, simplify, ResourceLimit

__all__ = ["parse", "format_formula", "evaluate", "substitute", "eliminate", "decide", "simplify", "ResourceLimit"]
