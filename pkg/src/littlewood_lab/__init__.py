"""Certified computations around Littlewood's conjecture and escape of mass for diagonal flows."""

from .realnum import (
    CertifiedInterval,
    Decision,
    DecimalLiteral,
    QuadraticSurd,
    Rational,
    compare,
    eval_real,
    format_real,
    nearest_integer,
    parse_real,
)

__version__ = "0.1.0"

__all__ = [
    "CertifiedInterval",
    "Decision",
    "DecimalLiteral",
    "QuadraticSurd",
    "Rational",
    "compare",
    "eval_real",
    "format_real",
    "nearest_integer",
    "parse_real",
]
