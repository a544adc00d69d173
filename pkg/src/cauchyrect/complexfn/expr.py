"""Integrand expression trees and their text grammar.

Grammar (ASCII, case-sensitive; ``i`` is the imaginary unit)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' integer)?
    atom   := number | 'i' | 'z' | 'pi' | 'e'
            | func '(' expr ')' | '(' expr ')' | '-' atom
    func   := 'exp' | 'sin' | 'cos' | 'log'

Unary minus binds to an atom, so ``-z^2`` is ``(-z)^2``.  Exponents are
integers (an optional leading ``-`` is accepted) with ``|n| <= 64``.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass

import numpy as np

from ..errors import EvaluationError, ExprLimitError, ExprSyntaxError

MAX_DEPTH = 128
MAX_EXPONENT = 64


class Expr:
    """Base node.  Nodes are immutable and compare structurally."""

    __slots__ = ()

    def __call__(self, z):
        """Vectorised evaluation on numpy arrays (see :func:`evaluate_array`)."""
        return evaluate_array(self, z)


@dataclass(frozen=True)
class Const(Expr):
    value: complex


@dataclass(frozen=True)
class Z(Expr):
    pass


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr


@dataclass(frozen=True)
class Sin(Expr):
    arg: Expr


@dataclass(frozen=True)
class Cos(Expr):
    arg: Expr


@dataclass(frozen=True)
class Log(Expr):
    arg: Expr


@dataclass(frozen=True)
class PowInt(Expr):
    base: Expr
    exponent: int


_FUNCS = {"exp": Exp, "sin": Sin, "cos": Cos, "log": Log}
_CONSTS = {"i": 1j, "pi": math.pi, "e": math.e}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.depth = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.take()
        if text != value or kind == "end":
            what = "end of input" if kind == "end" else repr(text)
            raise ExprSyntaxError(f"expected {value!r}, found {what}", pos)

    def enter(self, pos):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise ExprLimitError(f"expression nested deeper than {MAX_DEPTH} at offset {pos}")

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            kind, text, pos = self.take()
            if kind != "num" or not text.isdigit():
                raise ExprSyntaxError("exponent must be an integer literal", pos)
            n = sign * int(text)
            if abs(n) > MAX_EXPONENT:
                raise ExprLimitError(f"exponent {n} exceeds |n| <= {MAX_EXPONENT} at offset {pos}")
            return PowInt(base, n)
        return base

    def atom(self):
        kind, text, pos = self.take()
        if kind == "num":
            return Const(complex(float(text)))
        if kind == "name":
            if text == "z":
                return Z()
            if text in _CONSTS:
                return Const(complex(_CONSTS[text]))
            if text in _FUNCS:
                self.expect("(")
                self.enter(pos)
                inner = self.expr()
                self.depth -= 1
                self.expect(")")
                return _FUNCS[text](inner)
            raise ExprSyntaxError(f"unknown name {text!r}", pos)
        if text == "(":
            self.enter(pos)
            inner = self.expr()
            self.depth -= 1
            self.expect(")")
            return inner
        if text == "-" and kind == "op":
            self.enter(pos)
            inner = self.atom()
            self.depth -= 1
            return Neg(inner)
        what = "end of input" if kind == "end" else repr(text)
        raise ExprSyntaxError(f"unexpected {what}", pos)


def parse_expr(text: str) -> Expr:
    """Parse ``text`` into an :class:`Expr`.

    >>> parse_expr("z/(z^2+1)")
    Div(left=Z(), right=Add(left=PowInt(base=Z(), exponent=2), right=Const(value=(1+0j))))
    """
    parser = _Parser(text)
    node = parser.expr()
    kind, tok, pos = parser.peek()
    if kind != "end":
        raise ExprSyntaxError(f"unexpected {tok!r}", pos)
    if tree_depth(node) > MAX_DEPTH:
        raise ExprLimitError(f"expression tree deeper than {MAX_DEPTH}")
    return node


def tree_depth(node: Expr) -> int:
    children = [v for v in vars(node).values() if isinstance(v, Expr)] if not isinstance(node, (Const, Z)) else []
    return 1 + max((tree_depth(c) for c in children), default=0)


def to_text(node: Expr) -> str:
    """Fully parenthesised text that parses back to ``node``."""
    if isinstance(node, Z):
        return "z"
    if isinstance(node, Const):
        v = node.value
        if v == 1j:
            return "i"
        if v.imag == 0 and v.real >= 0:
            return repr(v.real)
        if v.imag == 0:
            return f"(-{repr(-v.real)})"
        return f"({repr(v.real)}+{repr(v.imag)}*i)"
    if isinstance(node, Neg):
        return f"(-{to_text(node.arg)})"
    if isinstance(node, PowInt):
        return f"({to_text(node.base)})^{node.exponent}"
    for cls, name in ((Exp, "exp"), (Sin, "sin"), (Cos, "cos"), (Log, "log")):
        if isinstance(node, cls):
            return f"{name}({to_text(node.arg)})"
    op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(node)]
    return f"({to_text(node.left)}{op}{to_text(node.right)})"


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _ipow(x, n: int):
    result = 1.0 + 0.0j if not isinstance(x, np.ndarray) else np.ones_like(x)
    base = x
    k = abs(n)
    while k:
        if k & 1:
            result = result * base
        base = base * base
        k >>= 1
    if n < 0:
        return 1.0 / result
    return result


def eval_expr(e: Expr, z: complex) -> complex:
    """Exact scalar evaluation with the principal-branch logarithm.

    Raises :class:`EvaluationError` on division by zero, log of zero,
    overflow, or any non-finite result.
    """
    z = complex(z)
    if not cmath.isfinite(z):
        raise EvaluationError("argument must be finite")
    try:
        value = _eval_scalar(e, z)
    except ZeroDivisionError as exc:
        raise EvaluationError(f"division by zero: {exc}") from None
    except OverflowError as exc:
        raise EvaluationError(f"overflow: {exc}") from None
    except ValueError as exc:
        raise EvaluationError(f"domain error: {exc}") from None
    if not cmath.isfinite(value):
        raise EvaluationError("non-finite result")
    return value


def _eval_scalar(e: Expr, z: complex) -> complex:
    if isinstance(e, Z):
        return z
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Add):
        return _eval_scalar(e.left, z) + _eval_scalar(e.right, z)
    if isinstance(e, Sub):
        return _eval_scalar(e.left, z) - _eval_scalar(e.right, z)
    if isinstance(e, Mul):
        return _eval_scalar(e.left, z) * _eval_scalar(e.right, z)
    if isinstance(e, Div):
        num = _eval_scalar(e.left, z)
        den = _eval_scalar(e.right, z)
        return num / den
    if isinstance(e, Neg):
        return -_eval_scalar(e.arg, z)
    if isinstance(e, Exp):
        return cmath.exp(_eval_scalar(e.arg, z))
    if isinstance(e, Sin):
        return cmath.sin(_eval_scalar(e.arg, z))
    if isinstance(e, Cos):
        return cmath.cos(_eval_scalar(e.arg, z))
    if isinstance(e, Log):
        arg = _eval_scalar(e.arg, z)
        if arg == 0:
            raise ValueError("log of zero")
        return cmath.log(arg)
    if isinstance(e, PowInt):
        base = _eval_scalar(e.base, z)
        if base == 0 and e.exponent < 0:
            raise ZeroDivisionError("zero to a negative power")
        return _ipow(base, e.exponent)
    raise TypeError(f"unknown node {type(e).__name__}")


def evaluate_array(e: Expr, z) -> np.ndarray:
    """Vectorised evaluation on a complex array; errors as in :func:`eval_expr`."""
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="raise", over="raise", invalid="raise"):
        try:
            out = _eval_array(e, z)
        except FloatingPointError as exc:
            raise EvaluationError(f"floating point error: {exc}") from None
    out = np.broadcast_to(np.asarray(out, dtype=complex), z.shape)
    if not np.all(np.isfinite(out)):
        raise EvaluationError("non-finite result")
    return out


def _eval_array(e: Expr, z):
    if isinstance(e, Z):
        return z
    if isinstance(e, Const):
        return np.full(z.shape, e.value, dtype=complex)
    if isinstance(e, Add):
        return _eval_array(e.left, z) + _eval_array(e.right, z)
    if isinstance(e, Sub):
        return _eval_array(e.left, z) - _eval_array(e.right, z)
    if isinstance(e, Mul):
        return _eval_array(e.left, z) * _eval_array(e.right, z)
    if isinstance(e, Div):
        den = _eval_array(e.right, z)
        if np.any(den == 0):
            raise EvaluationError("division by zero")
        return _eval_array(e.left, z) / den
    if isinstance(e, Neg):
        return -_eval_array(e.arg, z)
    if isinstance(e, Exp):
        return np.exp(_eval_array(e.arg, z))
    if isinstance(e, Sin):
        return np.sin(_eval_array(e.arg, z))
    if isinstance(e, Cos):
        return np.cos(_eval_array(e.arg, z))
    if isinstance(e, Log):
        arg = _eval_array(e.arg, z)
        if np.any(arg == 0):
            raise EvaluationError("log of zero")
        return np.log(arg)
    if isinstance(e, PowInt):
        base = _eval_array(e.base, z)
        if e.exponent < 0 and np.any(base == 0):
            raise EvaluationError("division by zero")
        return _ipow(base, e.exponent)
    raise TypeError(f"unknown node {type(e).__name__}")


def as_callable(f):
    """Accept an :class:`Expr`, expression text, or a vectorised callable."""
    if isinstance(f, str):
        f = parse_expr(f)
    if isinstance(f, Expr):
        return f
    if callable(f):
        return f
    raise TypeError("integrand must be an Expr, expression text, or a callable")
