"""Residues at isolated singularities by three independent routes.

* :func:`residue_simple_pole_formula` -- ``num(z0) / den'(z0)`` with the
  derivative taken from the coefficient list;
* :func:`residue_via_circle` -- ``(1/2πi) ∮ f`` by the trapezoid rule, any order;
* :func:`residue_limit_extrapolated` -- ``lim (z - z0) f(z)`` by Richardson
  extrapolation over shrinking steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .complexfn import RationalFn, as_callable, eval_expr
from .complexfn.expr import Expr
from .complexfn.rational import _scale, polyval
from .contour import known_poles, integrate_circle
from .errors import EvaluationError, ResidueError

SIMPLE_ROOT_TOL = 1e-10
CIRCLE_AGREEMENT = 1e-11
DEFAULT_CIRCLE_POINTS = 128
MAX_CIRCLE_POINTS = 8192
LIMIT_STEPS = tuple(2.0 ** -k for k in range(3, 13))
LIMIT_DIRECTION = complex(math.cos(0.3), math.sin(0.3))
LIMIT_DIVERGENCE_TOL = 1e-6


@dataclass
class PoleSite:
    location: complex
    multiplicity: int = 1
    residue: complex | None = None

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")


def _scalar(f, z: complex) -> complex:
    if isinstance(f, Expr):
        return eval_expr(f, z)
    value = np.asarray(f(np.asarray([z], dtype=complex)), dtype=complex).ravel()[0]
    if not np.isfinite(value):
        raise EvaluationError(f"integrand not finite at {z}")
    return complex(value)


def residue_simple_pole_formula(num, den: RationalFn, z0: complex) -> complex:
    """``num(z0) / den'(z0)`` at a simple root ``z0`` of ``den``.

    ``num`` is any evaluatable (it may itself contain transcendental factors);
    ``den`` contributes only its polynomial denominator -- its own numerator
    is ignored.
    """
    num = as_callable(num)
    z0 = complex(z0)
    p = den.den
    d = polyval(p, z0)
    dd = polyval(den.den_derivative, z0)
    if abs(d) > SIMPLE_ROOT_TOL * _scale(p, z0):
        raise ResidueError(f"{z0} is not a root of the denominator (|den| = {abs(d):.3g})")
    if abs(dd) <= SIMPLE_ROOT_TOL * _scale(den.den_derivative, z0):
        raise ResidueError(f"{z0} is a root of multiplicity > 1")
    return _scalar(num, z0) / dd


def residue_via_circle(f, z0: complex, radius: float,
                       n_points: int = DEFAULT_CIRCLE_POINTS) -> complex:
    """``(1/2πi) ∮_{|z - z0| = radius} f dz``.

    ``n_points`` is doubled until two successive trapezoid sums agree; failure
    to settle signals a singularity on or near the circle.  Known poles of
    ``f`` (other than ``z0``) inside the circle are rejected up front.
    """
    z0 = complex(z0)
    for p in known_poles(f):
        if abs(p - z0) > 1e-8 * (1 + abs(z0)) and abs(p - z0) < radius:
            raise ResidueError(f"another pole {p} lies inside the circle")
    n = n_points
    prev = integrate_circle(f, z0, radius, n)
    while n < MAX_CIRCLE_POINTS:
        n *= 2
        cur = integrate_circle(f, z0, radius, n)
        if abs(cur - prev) <= CIRCLE_AGREEMENT * max(1.0, abs(cur)):
            return cur / (2j * math.pi)
        prev = cur
    raise ResidueError("circle quadrature did not settle; another singularity is near the circle")


def default_radius(z0: complex, other_poles) -> float:
    """Half the distance to the nearest other pole, capped at 1."""
    dists = [abs(p - z0) for p in other_poles if abs(p - z0) > 1e-8 * (1 + abs(z0))]
    return min([1.0] + [0.5 * d for d in dists])


def _neville_to_zero(hs, values):
    p = list(values)
    n = len(hs)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (hs[i] * p[i + 1] - hs[i + m] * p[i]) / (hs[i] - hs[i + m])
    return p[0]


def residue_limit_extrapolated(f, z0: complex) -> complex:
    """``lim_{z -> z0} (z - z0) f(z)`` for a simple pole.

    Samples ``h f(z0 + h)`` along a fixed ray for ``|h| = 2^-3 ... 2^-12`` and
    applies three-point Richardson extrapolation (removing the ``h`` and
    ``h²`` terms) to each consecutive triple.  The last two extrapolants must
    agree, otherwise the pole is not simple.
    """
    func = as_callable(f)
    z0 = complex(z0)
    hs = [h * LIMIT_DIRECTION for h in LIMIT_STEPS]
    samples = []
    for h in hs:
        try:
            samples.append(h * _scalar(func, z0 + h))
        except EvaluationError as exc:
            raise ResidueError(f"evaluation failed near {z0}: {exc}") from None
    extrapolants = [_neville_to_zero(hs[k:k + 3], samples[k:k + 3])
                    for k in range(len(hs) - 2)]
    value = extrapolants[-1]
    spread = abs(extrapolants[-1] - extrapolants[-2])
    if not np.isfinite(value) or spread > LIMIT_DIVERGENCE_TOL * max(1.0, abs(value)):
        raise ResidueError(f"limit extrapolation diverges at {z0}; pole is not simple")
    return complex(value)
