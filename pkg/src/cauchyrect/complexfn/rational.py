"""Rational functions given by coefficient lists, and their poles."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .. import kernels
from ..errors import EvaluationError, RootFindingError

CLUSTER_RADIUS = 1e-8       # merge roots closer than this * (1 + |root|)
CANDIDATE_RADIUS = 2e-3     # look further, but only merge when p, p', ... vanish there
DERIVATIVE_TOL = 1e-12      # |p^(j)(centroid)| relative to its scale treated as zero
RESIDUAL_TOL = 1e-8


def _trim(coeffs) -> np.ndarray:
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    nz = np.flatnonzero(c)
    if nz.size == 0:
        return np.zeros(1, dtype=complex)
    return c[: nz[-1] + 1].copy()


def polyval(coeffs, z):
    """Horner evaluation; ``coeffs`` ascending."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z) + coeffs[-1]
    for ck in coeffs[-2::-1]:
        out = out * z + ck
    return out if out.ndim else complex(out)


def polyder(coeffs) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex)
    if c.size <= 1:
        return np.zeros(1, dtype=complex)
    return c[1:] * np.arange(1, c.size)


def polymul(p, q) -> np.ndarray:
    return np.convolve(np.asarray(p, dtype=complex), np.asarray(q, dtype=complex))


def expand_roots(roots, lead=1.0) -> np.ndarray:
    """Ascending coefficients of ``lead * prod(z - root)``."""
    out = np.array([lead], dtype=complex)
    for rt in roots:
        out = polymul(out, [-rt, 1.0])
    return out


@dataclass(frozen=True, eq=False)
class RationalFn:
    """``num(z) / den(z)``; coefficient lists are in ascending degree."""

    num: np.ndarray
    den: np.ndarray
    _poles: list = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        num = _trim(self.num)
        den = _trim(self.den)
        if den.size == 1 and den[0] == 0:
            raise ValueError("denominator must not vanish identically")
        if not (np.all(np.isfinite(num)) and np.all(np.isfinite(den))):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @property
    def deg_num(self) -> int:
        return 0 if (self.num.size == 1 and self.num[0] == 0) else self.num.size - 1

    @property
    def deg_den(self) -> int:
        return self.den.size - 1

    @property
    def degree_gap(self) -> int:
        return self.deg_den - self.deg_num

    def __call__(self, z):
        return polyval(self.num, z) / polyval(self.den, z)

    def evaluate(self, z: complex) -> complex:
        d = polyval(self.den, z)
        if d == 0:
            raise EvaluationError(f"pole at {z}")
        return polyval(self.num, z) / d

    def scaled(self, factor: complex) -> "RationalFn":
        return RationalFn(self.num * factor, self.den)

    @cached_property
    def den_derivative(self) -> np.ndarray:
        return polyder(self.den)

    def poles(self) -> list[tuple[complex, int]]:
        if self._poles is None:
            object.__setattr__(self, "_poles", rational_poles(self))
        return self._poles

    def pole_locations(self) -> tuple[complex, ...]:
        return tuple(p for p, _ in self.poles())

    def simple_partial_fractions(self):
        """``[(pole, A)]`` with ``f = sum A/(z - pole)``, or ``None``.

        Only available when every pole is simple and ``deg_den > deg_num``.
        """
        if self.degree_gap < 1 or any(m != 1 for _, m in self.poles()):
            return None
        dd = self.den_derivative
        return [(p, polyval(self.num, p) / polyval(dd, p)) for p, _ in self.poles()]

    def vertical_line_sup(self, x: float, y_max: float = 50.0) -> float:
        """Upper bound for ``|f(x + iy)|`` over ``y >= 0``.

        Analytic when simple partial fractions exist (``|z - p| >= |x - Re p|``);
        otherwise twice the maximum of 1024 samples on ``[0, y_max]``.
        """
        pf = self.simple_partial_fractions()
        if pf is not None:
            dist = [abs(x - p.real) for p, _ in pf]
            if min(dist) > 0:
                return float(sum(abs(A) / d for (_, A), d in zip(pf, dist)))
        ys = np.linspace(0.0, y_max, 1024)
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.abs(self(x + 1j * ys))
        if not np.all(np.isfinite(vals)):
            return math.inf
        return 2.0 * float(vals.max())

    def __repr__(self):
        return f"RationalFn(num={self.num.tolist()}, den={self.den.tolist()})"


def _initial_guesses(desc: np.ndarray) -> np.ndarray:
    n = desc.size - 1
    radius = abs(desc[-1]) ** (1.0 / n) if desc[-1] != 0 else 1.0
    radius = max(radius, 1e-3)
    angles = 2 * math.pi * np.arange(n) / n + 0.4
    return radius * np.exp(1j * angles)


def _newton_polish(coeffs, z, steps=3):
    d = polyder(coeffs)
    for _ in range(steps):
        p = polyval(coeffs, z)
        dp = polyval(d, z)
        if dp == 0 or p == 0:
            break
        trial = z - p / dp
        if abs(polyval(coeffs, trial)) < abs(p):
            z = trial
        else:
            break
    return z


def _scale(coeffs, z) -> float:
    return float(sum(abs(ck) * abs(z) ** k for k, ck in enumerate(coeffs))) or 1.0


def _vanishes(coeffs, z, order) -> bool:
    """Do p, p', ..., p^(order-1) all vanish at z (relative to their scale)?"""
    c = coeffs
    for _ in range(order):
        if abs(polyval(c, z)) > DERIVATIVE_TOL * _scale(c, z):
            return False
        c = polyder(c)
    return True


def _cluster(coeffs, roots):
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) < CANDIDATE_RADIUS * (1 + abs(roots[i])):
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)

    out = []
    for members in groups.values():
        pts = [roots[i] for i in members]
        m = len(pts)
        if m == 1:
            out.append((pts[0], 1))
            continue
        centre = sum(pts) / m
        tight = all(abs(p - centre) < CLUSTER_RADIUS * (1 + abs(centre)) for p in pts)
        # an m-fold root is a simple root of p^(m-1): polish the centroid there
        d = coeffs
        for _ in range(m - 1):
            d = polyder(d)
        polished = _newton_polish(d, centre, steps=8)
        if tight or _vanishes(coeffs, polished, m - 1):
            out.append((polished, m))
        else:
            out.extend((p, 1) for p in pts)
    return out


def polynomial_roots(coeffs) -> list[tuple[complex, int]]:
    """Roots of an ascending-coefficient polynomial with multiplicities."""
    c = _trim(coeffs)
    deg = c.size - 1
    if deg < 1:
        raise ValueError("polynomial must have degree >= 1")
    found: list[tuple[complex, int]] = []
    # exact zero roots
    k0 = int(np.flatnonzero(c)[0])
    if k0:
        found.append((0j, k0))
        c = c[k0:]
    rest = c.size - 1
    if rest == 1:
        found.append((complex(-c[0] / c[1]), 1))
    elif rest > 1:
        desc = (c / c[-1])[::-1]
        roots, _ = kernels.aberth(desc, _initial_guesses(desc))
        roots = [_newton_polish(c, complex(rt)) for rt in roots]
        found.extend(_cluster(c, roots))
    if sum(m for _, m in found) != deg:
        raise RootFindingError("multiplicities do not add up to the degree")
    full = _trim(coeffs)
    for rt, m in found:
        if not cmath.isfinite(rt):
            raise RootFindingError("root iteration diverged")
        res = abs(polyval(full, rt))
        if res > RESIDUAL_TOL * _scale(full, rt):
            # near z = 0 the relative residual degenerates to |c0| / |c0|;
            # fall back to the Newton step as a forward-error estimate
            dp = abs(polyval(polyder(full), rt))
            if not (dp > 0 and m * res / dp <= RESIDUAL_TOL * (1 + abs(rt))):
                raise RootFindingError(f"root {rt} failed the residual check")
    found.sort(key=lambda item: (round(item[0].real, 12), round(item[0].imag, 12)))
    return found


def rational_poles(f: RationalFn) -> list[tuple[complex, int]]:
    """All denominator roots of ``f`` with multiplicities.

    >>> [(complex(round(p.real, 12), round(p.imag, 12)), m)
    ...  for p, m in rational_poles(RationalFn([1], [1, 0, 1]))]
    [(-1j, 1), (1j, 1)]
    """
    if f.deg_den < 1:
        raise ValueError("denominator must have degree >= 1")
    return polynomial_roots(f.den)
