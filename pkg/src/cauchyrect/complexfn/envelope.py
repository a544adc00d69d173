"""Power series ``g(w) = sum_{n>=1} c_n w^n`` composed as ``f1(z) = g(e^{ibz})``.

For ``y >= 0`` we have ``|e^{ib(x+iy)}| = e^{-by} <= 1``, so
``|g(e^{ib(x+iy)})| <= e^{-by} * S`` with ``S = sum |c_n|``, uniformly in x,
and the vertical integral of that envelope is at most ``S / b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

KINDS = ("ExpAMinusOne", "OneMinusCosA", "SinA", "GeomInverse", "LogRatio",
         "Monomial", "GeneralCoefficients", "ExpA")

GENERAL_STOP_RATIO = 1e-18
GENERAL_STOP_RUN = 8
GENERAL_MAX_TERMS = 100_000


@dataclass(frozen=True, eq=False)
class SeriesEnvelope:
    """A named power series with no constant term, plus the frequency ``b > 0``.

    Use the constructors (:meth:`exp_a_minus_one`, :meth:`geom_inverse`, ...)
    rather than filling ``params`` by hand.

    ``LogRatio`` has two forms: ``"cos"`` is ``2 log(1 + q w)`` and ``"sin"``
    is ``2 [log(1 - i q w) - log(1 + i q w)]``, both with ``q = a/c``.  They
    produce ``log(a² ± 2ac cos/sin + c²)`` on the real axis.
    """

    kind: str
    b: float
    params: tuple = ()
    coefficients: tuple = ()
    generator: Callable[[int], complex] | None = field(default=None, repr=False)
    constant: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown envelope kind {self.kind!r}")
        if not (self.b > 0 and math.isfinite(self.b)):
            raise ValueError("b must be a positive finite number")
        if self.kind in ("GeomInverse", "LogRatio"):
            a, c = self.params[:2]
            if not 0 < a < c:
                raise ValueError("need c > a > 0 (radius of convergence c/a > 1)")
        elif self.kind not in ("Monomial", "GeneralCoefficients"):
            if not self.params[0] > 0:
                raise ValueError("a must be positive")
        if self.kind == "LogRatio" and self.params[2] not in ("cos", "sin"):
            raise ValueError("LogRatio form must be 'cos' or 'sin'")
        if self.kind == "GeneralCoefficients" and not (self.coefficients or self.generator):
            raise ValueError("GeneralCoefficients needs a coefficient list or generator")
        if self.constant != 0 and self.kind != "ExpA":
            raise ValueError("series envelopes must not have a constant term")

    # -- constructors -----------------------------------------------------
    @classmethod
    def exp_a_minus_one(cls, a, b=1.0):
        return cls("ExpAMinusOne", float(b), (float(a),))

    @classmethod
    def one_minus_cos_a(cls, a, b=1.0):
        return cls("OneMinusCosA", float(b), (float(a),))

    @classmethod
    def sin_a(cls, a, b=1.0):
        return cls("SinA", float(b), (float(a),))

    @classmethod
    def geom_inverse(cls, a, c, b=1.0):
        """``1/(c + a w) - 1/c``."""
        return cls("GeomInverse", float(b), (float(a), float(c)))

    @classmethod
    def log_ratio(cls, a, c, form="cos", b=1.0):
        return cls("LogRatio", float(b), (float(a), float(c), form))

    @classmethod
    def monomial(cls, b=1.0):
        """``g(w) = w``, i.e. ``f1(z) = e^{ibz}``."""
        return cls("Monomial", float(b))

    @classmethod
    def general(cls, coefficients: Sequence[complex] | Callable[[int], complex], b=1.0):
        """``coefficients[k]`` is ``c_{k+1}``; a callable maps ``n >= 1`` to ``c_n``."""
        if callable(coefficients):
            return cls("GeneralCoefficients", float(b), generator=coefficients)
        return cls("GeneralCoefficients", float(b),
                   coefficients=tuple(complex(v) for v in coefficients))

    @classmethod
    def exp_a_with_constant(cls, a, b=1.0):
        """``e^{aw}`` with its constant term kept.

        Violates the no-constant-term requirement on purpose: it reproduces
        the historical wrong evaluation and is rejected by the hypothesis
        checks.
        """
        return cls("ExpA", float(b), (float(a),), constant=1.0)

    # -- series data ------------------------------------------------------
    def coefficient(self, n: int) -> complex:
        """``c_n`` for ``n >= 1`` (``n = 0`` returns the constant term)."""
        if n < 0:
            raise ValueError("n must be non-negative")
        if n == 0:
            return complex(self.constant)
        kind = self.kind
        if kind in ("ExpAMinusOne", "ExpA"):
            a = self.params[0]
            return complex(math.exp(n * math.log(a) - math.lgamma(n + 1)))
        if kind == "OneMinusCosA":
            if n % 2:
                return 0j
            a = self.params[0]
            sign = 1 if (n // 2) % 2 else -1
            return complex(sign * math.exp(n * math.log(a) - math.lgamma(n + 1)))
        if kind == "SinA":
            if n % 2 == 0:
                return 0j
            a = self.params[0]
            sign = 1 if ((n - 1) // 2) % 2 == 0 else -1
            return complex(sign * math.exp(n * math.log(a) - math.lgamma(n + 1)))
        if kind == "GeomInverse":
            a, c = self.params
            return complex((-a / c) ** n / c)
        if kind == "LogRatio":
            a, c, form = self.params
            q = a / c
            if form == "cos":
                return complex(2.0 * (-1) ** (n + 1) * q ** n / n)
            if n % 2 == 0:
                return 0j
            return -4.0 * (1j * q) ** n / n
        if kind == "Monomial":
            return 1.0 + 0j if n == 1 else 0j
        if self.generator is not None:
            return complex(self.generator(n))
        return self.coefficients[n - 1] if n <= len(self.coefficients) else 0j

    @property
    def abs_sum(self) -> float:
        """``S = sum_{n>=1} |c_n|`` in closed form where one exists."""
        kind = self.kind
        if kind in ("ExpAMinusOne", "ExpA"):
            return math.expm1(self.params[0])
        if kind == "OneMinusCosA":
            return math.cosh(self.params[0]) - 1.0
        if kind == "SinA":
            return math.sinh(self.params[0])
        if kind == "GeomInverse":
            a, c = self.params
            return a / (c * (c - a))
        if kind == "LogRatio":
            a, c, form = self.params
            q = a / c
            if form == "cos":
                return -2.0 * math.log1p(-q)
            return 4.0 * math.atanh(q)
        if kind == "Monomial":
            return 1.0
        return _general_abs_sum(self)

    @property
    def radius_of_convergence(self) -> float:
        if self.kind in ("GeomInverse", "LogRatio"):
            a, c = self.params[:2]
            return c / a
        if self.kind == "GeneralCoefficients" and self.generator is not None:
            return math.nan  # unknown; S finite is the usable certificate
        return math.inf

    def partial_abs_sum(self, n_terms: int) -> float:
        return float(sum(abs(self.coefficient(n)) for n in range(1, n_terms + 1)))

    # -- evaluation -------------------------------------------------------
    def g(self, w):
        """Evaluate the series at ``w`` (vectorised, complex)."""
        w = np.asarray(w, dtype=complex)
        kind = self.kind
        if kind == "ExpAMinusOne":
            return np.expm1(self.params[0] * w)
        if kind == "ExpA":
            return np.exp(self.params[0] * w)
        if kind == "OneMinusCosA":
            s = np.sin(0.5 * self.params[0] * w)
            return 2.0 * s * s
        if kind == "SinA":
            return np.sin(self.params[0] * w)
        if kind == "GeomInverse":
            a, c = self.params
            return -a * w / (c * (c + a * w))
        if kind == "LogRatio":
            a, c, form = self.params
            q = a / c
            if form == "cos":
                return 2.0 * np.log1p(q * w)
            return 2.0 * (np.log1p(-1j * q * w) - np.log1p(1j * q * w))
        if kind == "Monomial":
            return w
        coeffs = self._general_coefficients()
        out = np.zeros_like(w)
        for cn in coeffs[::-1]:
            out = (out + cn) * w
        return out

    def _general_coefficients(self):
        if self.generator is None:
            return list(self.coefficients)
        coeffs, _ = _general_terms(self)
        return coeffs

    def __call__(self, z):
        """``f1(z) = g(e^{ibz})``."""
        return self.g(np.exp(1j * self.b * np.asarray(z, dtype=complex)))

    def with_b(self, b):
        return SeriesEnvelope(self.kind, float(b), self.params, self.coefficients,
                              self.generator, self.constant)


def _general_terms(env: SeriesEnvelope):
    """Coefficients until 8 consecutive terms fall below 1e-18 of the running |sum|."""
    coeffs = []
    total = 0.0
    run = 0
    for n in range(1, GENERAL_MAX_TERMS + 1):
        cn = complex(env.generator(n))
        coeffs.append(cn)
        total += abs(cn)
        if total > 0 and abs(cn) < GENERAL_STOP_RATIO * total:
            run += 1
            if run >= GENERAL_STOP_RUN:
                return coeffs, total
        else:
            run = 0
    return coeffs, math.inf


def _general_abs_sum(env: SeriesEnvelope) -> float:
    if env.generator is None:
        return float(sum(abs(c) for c in env.coefficients))
    return _general_terms(env)[1]


def envelope_bounds(g: SeriesEnvelope, y: float) -> tuple[float, float]:
    """``(sup_x |g(e^{ib(x+iy)})|`` bound, ``∫_0^∞ |g(e^{ib(x+iy)})| dy`` bound).

    >>> envelope_bounds(SeriesEnvelope.monomial(b=2.0), 0.0)
    (1.0, 0.5)
    """
    if not y >= 0:
        raise ValueError("y must be non-negative")
    s = g.abs_sum
    return math.exp(-g.b * y) * s, s / g.b
