"""Complex arithmetic helpers: expressions, rational functions, series envelopes."""

from .envelope import SeriesEnvelope, envelope_bounds
from .expr import (Add, Const, Cos, Div, Exp, Expr, Log, Mul, Neg, PowInt, Sin,
                   Sub, Z, as_callable, eval_expr, evaluate_array, parse_expr,
                   to_text)
from .product import EnvelopeProduct
from .rational import RationalFn, expand_roots, polynomial_roots, rational_poles

__all__ = [
    "Add", "Const", "Cos", "Div", "Exp", "Expr", "Log", "Mul", "Neg", "PowInt",
    "Sin", "Sub", "Z", "as_callable", "eval_expr", "evaluate_array",
    "parse_expr", "to_text", "RationalFn", "expand_roots", "polynomial_roots",
    "rational_poles", "SeriesEnvelope", "envelope_bounds", "EnvelopeProduct",
]
