"""Line integrals ``∫ f(z) dz`` along segments, rectangles, circles and arcs.

Integrands are anything :func:`~cauchyrect.complexfn.as_callable` accepts: an
``Expr``, expression text, or a callable vectorised over complex arrays.  When
the integrand knows its poles (``pole_locations()``), paths passing within
``POLE_CLEARANCE`` of one are refused.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .complexfn import RationalFn, SeriesEnvelope, as_callable
from .complexfn.product import EnvelopeProduct
from .errors import PoleOnContourError, QuadratureError
from .quadrature import MAX_DEPTH, QuadratureResult, gk_chunks

POLE_CLEARANCE = 1e-6
MIN_TAIL_HEIGHT = 10.0


@dataclass(frozen=True)
class Rectangle:
    x1: float
    x2: float
    y1: float
    y2: float

    def __post_init__(self):
        if not (self.x1 < self.x2 and self.y1 < self.y2):
            raise ValueError("need x1 < x2 and y1 < y2")

    @property
    def corners(self) -> tuple[complex, complex, complex, complex]:
        """Counterclockwise from the lower-left corner."""
        return (complex(self.x1, self.y1), complex(self.x2, self.y1),
                complex(self.x2, self.y2), complex(self.x1, self.y2))

    def contains(self, z: complex) -> bool:
        return self.x1 < z.real < self.x2 and self.y1 < z.imag < self.y2


def known_poles(f) -> tuple[complex, ...]:
    getter = getattr(f, "pole_locations", None)
    return tuple(getter()) if callable(getter) else ()


def _distance_to_segment(p: complex, a: complex, b: complex) -> float:
    d = b - a
    if d == 0:
        return abs(p - a)
    t = ((p - a) * d.conjugate()).real / abs(d) ** 2
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * d))


def _check_clearance(f, a: complex, b: complex):
    for p in known_poles(f):
        if _distance_to_segment(p, a, b) < POLE_CLEARANCE:
            raise PoleOnContourError(f"pole {p} lies within {POLE_CLEARANCE} of segment {a} -> {b}")


def integrate_segment(f, z_start: complex, z_end: complex, tol: float,
                      max_depth: int = MAX_DEPTH) -> QuadratureResult:
    """``∫ f(z) dz`` along the straight segment from ``z_start`` to ``z_end``.

    The segment is always integrated in a canonical direction (lexicographic
    on (re, im)), so reversing it negates the value exactly.

    Raises :class:`QuadratureError` if adaptive bisection hits ``max_depth``.
    """
    func = as_callable(f)
    a, b = complex(z_start), complex(z_end)
    if a == b:
        return QuadratureResult(0j, 0.0, 0, True)
    _check_clearance(f, a, b)
    flip = (b.real, b.imag) < (a.real, a.imag)
    if flip:
        a, b = b, a
    d = b - a

    def along(t):
        return np.asarray(func(a + t * d), dtype=complex) * d

    res = gk_chunks(along, [0.0, 1.0], tol, max_depth)
    value = complex(res.values[0])
    out = QuadratureResult(-value if flip else value, float(res.errors[0]),
                           res.evaluations, bool(res.converged[0]))
    if not out.converged:
        raise QuadratureError(
            f"segment {z_start} -> {z_end}: depth cap {max_depth} reached "
            "(nearby singularity or tolerance too tight)", out)
    return out


def integrate_path(f, vertices, tol: float) -> QuadratureResult:
    """Polyline integral; ``tol`` is shared equally among the segments."""
    vertices = [complex(v) for v in vertices]
    n = len(vertices) - 1
    if n < 1:
        raise ValueError("a path needs at least two vertices")
    parts = [integrate_segment(f, vertices[k], vertices[k + 1], tol / n) for k in range(n)]
    return _combine(parts)


def _combine(parts) -> QuadratureResult:
    return QuadratureResult(
        sum(p.value for p in parts),
        float(sum(p.error_estimate for p in parts)),
        sum(p.evaluations for p in parts),
        all(p.converged for p in parts),
    )


def integrate_rectangle(f, rect: Rectangle, tol: float) -> QuadratureResult:
    """Counterclockwise boundary integral of ``f`` around ``rect``."""
    c = rect.corners
    return integrate_path(f, [c[0], c[1], c[2], c[3], c[0]], tol)


def two_path_difference(f, rect: Rectangle, tol: float) -> complex:
    """(bottom edge then right edge) minus (left edge then top edge).

    Zero when ``f`` is holomorphic on the closed rectangle; otherwise equal
    to the counterclockwise boundary integral.
    """
    c = rect.corners
    first = integrate_path(f, [c[0], c[1], c[2]], tol / 2)
    second = integrate_path(f, [c[0], c[3], c[2]], tol / 2)
    return first.value - second.value


def integrate_circle(f, center: complex, radius: float, n_points: int = 64) -> complex:
    """Counterclockwise ``∮ f dz`` on a circle by the periodic trapezoid rule."""
    if not radius > 0:
        raise ValueError("radius must be positive")
    if n_points < 16:
        raise ValueError("n_points must be at least 16")
    func = as_callable(f)
    center = complex(center)
    for p in known_poles(f):
        if abs(abs(p - center) - radius) < POLE_CLEARANCE:
            raise PoleOnContourError(f"pole {p} lies on the circle")
    theta = 2.0 * math.pi * np.arange(n_points) / n_points
    u = np.exp(1j * theta)
    z = center + radius * u
    fz = np.asarray(func(z), dtype=complex)
    if not np.all(np.isfinite(fz)):
        raise QuadratureError("integrand not finite on the circle")
    # dz = i r e^{iθ} dθ, dθ = 2π/n
    return complex(np.sum(fz * u) * (1j * radius * 2.0 * math.pi / n_points))


def semicircle_integral(f, R: float, tol: float, max_depth: int = MAX_DEPTH) -> QuadratureResult:
    """``∫ f dz`` over the upper half circle ``z = R e^{iθ}``, ``θ`` from 0 to π."""
    if not R > 0:
        raise ValueError("R must be positive")
    func = as_callable(f)
    for p in known_poles(f):
        if abs(abs(p) - R) < POLE_CLEARANCE and p.imag >= -POLE_CLEARANCE:
            raise PoleOnContourError(f"pole {p} lies on the arc")

    def along(theta):
        z = R * np.exp(1j * theta)
        return np.asarray(func(z), dtype=complex) * (1j * z)

    # decaying factors like e^{-bR sin θ} live in layers of width ~1/R at
    # both ends; cut geometrically towards θ = 0 and θ = π
    steps = [2.0 ** k / R for k in range(80) if 2.0 ** k / R < 0.5 * math.pi]
    edges = sorted({0.0, 0.5 * math.pi, math.pi, *steps, *(math.pi - t for t in steps)})
    res = gk_chunks(along, edges, tol / (len(edges) - 1), max_depth)
    out = QuadratureResult(complex(np.sum(res.values)), float(np.sum(res.errors)),
                           res.evaluations, bool(res.converged.all()))
    if not out.converged:
        raise QuadratureError("semicircle quadrature hit the depth cap", out)
    return out


def tail_height(f1: SeriesEnvelope, sup_f2: float, tol: float) -> float:
    """Height above which the vertical tail is certified below ``tol / 2``."""
    s = f1.abs_sum
    if s == 0 or sup_f2 == 0:
        return MIN_TAIL_HEIGHT
    return max(MIN_TAIL_HEIGHT, math.log(s * sup_f2 * 2.0 / (f1.b * tol)) / f1.b)


def vertical_tail_integral(f1: SeriesEnvelope, f2: RationalFn, x: float,
                           tol: float) -> QuadratureResult:
    """``∫_0^∞ f1(x+iy) f2(x+iy) i dy`` (the path integral straight up from x).

    The path is cut at a height Y where the envelope bound
    ``S * sup|f2| * e^{-bY} / b`` drops below ``tol / 2``; that remainder is
    added to the error estimate.
    """
    for p in f2.pole_locations():
        if abs(p.real - x) < POLE_CLEARANCE and p.imag > -POLE_CLEARANCE:
            raise PoleOnContourError(f"pole {p} lies on the vertical line Re z = {x}")
    sup_f2 = f2.vertical_line_sup(x)
    if not math.isfinite(sup_f2):
        raise PoleOnContourError(f"f2 is unbounded on Re z = {x}")
    y_top = tail_height(f1, sup_f2, tol)
    remainder = f1.abs_sum * sup_f2 * math.exp(-f1.b * y_top) / f1.b
    body = integrate_segment(EnvelopeProduct(f1, f2), complex(x, 0.0), complex(x, y_top), tol / 2)
    return QuadratureResult(body.value, body.error_estimate + remainder,
                            body.evaluations, body.converged)
