"""Direct quadrature of slowly convergent oscillatory integrals over ``[0, ∞)``.

Periodic integrands are integrated one period at a time.  The cumulative sums
``s_k = ∫_0^{kT} f`` then have a tail that expands in powers of ``1/k``
(repeated integration by parts against a rational envelope), so polynomial
extrapolation in ``1/k`` converges quickly.  Iterated Aitken Δ² is kept
alongside for near-geometric tails; ``method="auto"`` takes whichever
reports the smaller error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import QuadratureError
from .quadrature import EPS, QuadratureResult, gk_chunks, half_line, tanh_sinh

DEFAULT_CHUNKS = 64
MAX_CHUNKS = 512
REMOVABLE_RADIUS = 1e-8
AITKEN_ITERATIONS = 3
RICHARDSON_POINTS = 7           # nodes K*j/8 for j = 2..8
SERIES_CUTOFF = 1e-18


@dataclass(frozen=True)
class SingularPoint:
    x: float
    kind: str                   # "removable" or "log"
    value: float = 0.0          # limit value for removable points

    def __post_init__(self):
        if self.kind not in ("removable", "log"):
            raise ValueError("singular point kind must be 'removable' or 'log'")
        if self.x < 0:
            raise ValueError("singular points lie on [0, inf)")


@dataclass(frozen=True, eq=False)
class OscillatoryIntegrand:
    """A real integrand on ``[0, ∞)``.

    ``period`` is ``None`` for aperiodic (absolutely convergent) integrands.
    ``kernel`` optionally names a compiled catalog integrand as
    ``(kind, (a, b, r, c))``; it must agree with ``func``.
    """

    func: Callable[[np.ndarray], np.ndarray]
    period: float | None = None
    singular_points: tuple[SingularPoint, ...] = ()
    kernel: tuple[int, tuple] | None = None

    def __post_init__(self):
        if self.period is not None and not self.period > 0:
            raise ValueError("period must be positive")
        pts = tuple(sorted(self.singular_points, key=lambda s: s.x))
        object.__setattr__(self, "singular_points", pts)

    @classmethod
    def catalog(cls, kind: int, a: float, b: float, r: float, c: float = 0.0):
        params = (float(a), float(b), float(r), float(c))

        def func(x):
            return kernels.catalog_integrand_numpy(kind, x, *params)

        return cls(func, 2.0 * math.pi / b, (), (kind, params))

    @property
    def periodic(self) -> bool:
        return self.period is not None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        removable = [s for s in self.singular_points if s.kind == "removable"]
        if not removable:
            return self.func(x)
        out = np.empty_like(x)
        mask = np.zeros(x.shape, dtype=bool)
        for s in removable:
            near = np.abs(x - s.x) < REMOVABLE_RADIUS
            out[near] = s.value
            mask |= near
        if (~mask).any():
            out[~mask] = self.func(x[~mask])
        return out

    def reflected(self) -> "OscillatoryIntegrand":
        """``x -> f(-x)`` as an integrand on ``[0, ∞)``."""
        if self.kernel is not None or any(s.x != 0 for s in self.singular_points):
            pts = tuple(s for s in self.singular_points if s.x == 0)
        else:
            pts = self.singular_points
        return OscillatoryIntegrand(lambda x: self.func(-np.asarray(x)), self.period, pts)


@dataclass
class AccelState:
    partial_sums: list
    value: complex | float = math.nan
    error: float = math.inf
    method: str = ""

    def __post_init__(self):
        if len(self.partial_sums) >= 6:
            self.value, self.error, self.method = _accelerate(self.partial_sums, "auto")


# -- partial sums ----------------------------------------------------------

def _chunks(f: OscillatoryIntegrand, edges: np.ndarray, tol: float):
    if f.kernel is not None:
        kind, params = f.kernel
        res = kernels.catalog_chunk_integrals(kind, params, edges, tol)
    else:
        res = gk_chunks(f, edges, tol)
    if not np.all(res.converged):
        bad = int(np.flatnonzero(~res.converged)[0])
        raise QuadratureError(f"chunk [{edges[bad]:g}, {edges[bad + 1]:g}] hit the depth cap")
    return res


def period_partial_sums(f: OscillatoryIntegrand, k_max: int, tol: float = 1e-12) -> list:
    """``[∫_0^{kT} f for k = 1..k_max]``; each period chunk to ``tol / k_max``."""
    return _period_sums(f, k_max, tol)[0]


def _period_sums(f, k_max, tol):
    if not f.periodic:
        raise ValueError("integrand has no period")
    if k_max < 4:
        raise ValueError("k_max must be at least 4")
    edges = f.period * np.arange(k_max + 1, dtype=float)
    res = _chunks(f, edges, tol / k_max)
    return list(np.cumsum(res.values)), res.evaluations


# -- acceleration ----------------------------------------------------------

def _aitken(s: np.ndarray):
    col = np.asarray(s)
    for _ in range(AITKEN_ITERATIONS):
        if col.size < 3:
            break
        d1 = col[1:-1] - col[:-2]
        d2 = col[2:] - 2.0 * col[1:-1] + col[:-2]
        safe = np.abs(d2) > 1e3 * EPS * np.maximum(np.abs(col[2:]), 1e-300)
        nxt = np.where(safe, col[:-2] - d1 * d1 / np.where(safe, d2, 1.0), col[2:])
        col = nxt
    if col.size < 2:
        return col[-1], abs(s[-1] - s[-2])
    return col[-1], float(abs(col[-1] - col[-2]))


def _neville_zero(h: np.ndarray, y: np.ndarray):
    p = np.array(y, dtype=complex if np.iscomplexobj(y) else float)
    n = len(h)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (h[i] * p[i + 1] - h[i + m] * p[i]) / (h[i] - h[i + m])
    return p[0]


def _richardson(s: np.ndarray):
    """Polynomial extrapolation in ``1/k`` of ``s_k`` (``s[k-1]``) at ``k = K j / 8``."""
    n = len(s)
    ks = sorted({max(1, round(n * j / 8)) for j in range(2, 9)})
    if len(ks) < 4:
        return s[-1], math.inf
    h = 1.0 / np.asarray(ks, dtype=float)
    y = np.asarray([s[k - 1] for k in ks])
    full = _neville_zero(h, y)
    lower = _neville_zero(h[1:], y[1:])
    return full, float(abs(full - lower))


def _accelerate(s, method):
    s = np.asarray(s)
    if method == "aitken":
        v, e = _aitken(s)
        return v, e, "aitken"
    if method == "richardson":
        v, e = _richardson(s)
        return v, e, "richardson"
    if method != "auto":
        raise ValueError("method must be 'auto', 'aitken' or 'richardson'")
    va, ea = _aitken(s)
    vr, er = _richardson(s)
    if not np.isfinite(va):
        ea = math.inf
    return (va, ea, "aitken") if ea <= er else (vr, er, "richardson")


def accelerate_sequence(s: Sequence, method: str = "auto"):
    """Limit of a slowly converging sequence and an error estimate.

    ``"aitken"`` iterates Δ² (at most three times) and reports the spread of
    the last column; ``"richardson"`` extrapolates polynomially in ``1/k``;
    ``"auto"`` returns whichever estimate claims the smaller error.

    >>> accelerate_sequence([1 - 2.0 ** -k for k in range(1, 11)])
    (1.0, 0.0)
    """
    if len(s) < 6:
        raise ValueError("need at least 6 terms")
    value, err, _ = _accelerate(s, method)
    value = complex(value) if np.iscomplexobj(value) else float(np.real(value))
    if not np.isfinite(value):
        return s[-1], abs(s[-1] - s[-2]) + abs(s[-1])
    return value, err


# -- integration drivers ---------------------------------------------------

def _magnitude(f) -> float:
    """Rough ``period * max|f|`` over the first two periods."""
    x = np.linspace(0.0, 2.0 * f.period, 257)[1:]
    return f.period * float(np.max(np.abs(f(x))))


def _periodic(f, tol, rtol, whole_line, strict, chunks):
    k = chunks
    evals = 0
    # asking the chunks for less than ~1e-14 of the integrand scale only hits roundoff
    inner = max(1e-3 * tol, 1e-14 * _magnitude(f))
    while True:
        sums, n = _period_sums(f, k, inner)
        evals += n
        if whole_line:
            neg, n = _period_sums(f.reflected(), k, inner)
            evals += n
            sums = list(np.add(sums, neg))
        value, err = accelerate_sequence(sums)
        if err <= max(tol, rtol * abs(value)):
            return QuadratureResult(value, err, evals, True)
        if k >= MAX_CHUNKS:
            break
        k *= 2
    out = QuadratureResult(value, err, evals, False)
    if strict:
        raise QuadratureError(f"acceleration stagnated at {k} periods (error {err:.3g})", out)
    return out


def _aperiodic_half(f, tol):
    logs = [s.x for s in f.singular_points if s.kind == "log"]
    cuts = [0.0] + [x for x in logs if x > 0]
    if len(cuts) > 1:
        cuts.append(2.0 * cuts[-1])
    pieces = [tanh_sinh(f, lo, hi, tol / (len(cuts) + 1)) for lo, hi in zip(cuts[:-1], cuts[1:])]
    pieces.append(half_line(f, cuts[-1], tol / (len(cuts) + 1)))
    return QuadratureResult(sum(p.value for p in pieces),
                            float(sum(p.error_estimate for p in pieces)),
                            sum(p.evaluations for p in pieces), True)


def evaluate_real_integral(f: OscillatoryIntegrand, tol: float = 1e-10, rtol: float = 0.0,
                           whole_line: bool = False, strict: bool = True,
                           chunks: int = DEFAULT_CHUNKS) -> QuadratureResult:
    """``∫_0^∞ f`` (or ``∫_{-∞}^{∞}`` with ``whole_line``).

    Periodic integrands: period sums plus acceleration, starting with
    ``chunks`` periods and doubling up to 512 until the error estimate meets
    ``max(tol, rtol * |value|)``.  Aperiodic integrands: tanh-sinh on pieces
    split at log singularities, then a mapped half-line tail.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not 16 <= chunks <= MAX_CHUNKS:
        raise ValueError(f"chunks must lie in [16, {MAX_CHUNKS}]")
    if f.periodic:
        return _periodic(f, tol, rtol, whole_line, strict, chunks)
    out = _aperiodic_half(f, tol)
    if whole_line:
        neg = _aperiodic_half(f.reflected(), tol)
        out = QuadratureResult(out.value + neg.value, out.error_estimate + neg.error_estimate,
                               out.evaluations + neg.evaluations, True)
    return out


# -- Dirichlet bound and the divergent integral ---------------------------

def dirichlet_integrand(a: float):
    """``e^{a cos x} sin(a sin x)``, with zero mean over each period ``2π``."""
    return lambda x: np.exp(a * np.cos(x)) * np.sin(a * np.sin(x))


class BoundCheck(NamedTuple):
    passed: bool
    witness: str
    values: tuple

    def __bool__(self):
        return self.passed


def dirichlet_bound_check(a: float, R_samples: Sequence[float]) -> BoundCheck:
    """Check ``|∫_0^R e^{a cos x} sin(a sin x) dx| <= π e^a`` at each ``R``."""
    if not a > 0:
        raise ValueError("a must be positive")
    bound = math.pi * math.exp(a)
    g = dirichlet_integrand(a)
    values = []
    for R in R_samples:
        if R < 0:
            raise ValueError("R must be non-negative")
        if R == 0:
            values.append(0.0)
            continue
        n = max(1, int(math.ceil(R / (2.0 * math.pi))))
        res = gk_chunks(g, np.linspace(0.0, R, n + 1), 1e-12)
        v = float(np.sum(res.values))
        values.append(v)
        if abs(v) > bound:
            return BoundCheck(False, f"|I({R:g})| = {abs(v):.6g} > π e^a = {bound:.6g}",
                              tuple(values))
    return BoundCheck(True, f"max |I| = {max(map(abs, values), default=0.0):.6g} <= {bound:.6g}",
                      tuple(values))


def f_series_coefficients(a: float, b: float) -> np.ndarray:
    """``a^n / (n! i b n)`` for n = 1, 2, ... until ``a^n/n!`` drops below 1e-18."""
    out = []
    n = 1
    term = a
    while term >= SERIES_CUTOFF or n <= 2:
        out.append(term / (1j * b * n))
        n += 1
        term *= a / n
    return np.asarray(out)


def f_series(a: float, b: float, x):
    """Antiderivative ``Σ a^n e^{ibnx} / (n! i b n)`` of ``e^{a e^{ibx}} - 1``."""
    coeffs = f_series_coefficients(a, b)
    x = np.asarray(x, dtype=float)
    n = np.arange(1, coeffs.size + 1)
    return np.exp(1j * b * np.multiply.outer(x, n)) @ coeffs


def divergence_limit_by_series(a: float, b: float, r: float, k_max: int = 256) -> complex:
    """``∫_0^∞ f(x) (x² - r²)/(x² + r²)² dx`` with ``f`` from :func:`f_series`."""
    def integrand(x):
        x2 = x * x
        return f_series(a, b, x) * (x2 - r * r) / (x2 + r * r) ** 2

    period = 2.0 * math.pi / b
    res = gk_chunks(integrand, period * np.arange(k_max + 1, dtype=float), 1e-14)
    return complex(accelerate_sequence(np.cumsum(res.values))[0])


class DivergenceProbe(NamedTuple):
    R: tuple
    raw: tuple
    stabilized: tuple
    limit: complex
    limit_error: float


def divergent_integrand(a: float, b: float, r: float):
    return lambda x: np.exp(a * np.exp(1j * b * x)) * x / (x * x + r * r)


def divergence_probe(a: float, b: float, r: float, R_grid: Sequence[float],
                     tol: float = 1e-11) -> DivergenceProbe:
    """Partial integrals of ``e^{a e^{ibx}} x/(x² + r²)`` up to each ``R``.

    ``stabilized`` subtracts ``½ log(1 + R²/r²)``, the integral of the
    constant term; ``limit`` is the accelerated value of the convergent
    remainder ``∫_0^∞ (e^{a e^{ibx}} - 1) x/(x² + r²) dx``.
    """
    if not (a > 0 and b > 0 and r > 0):
        raise ValueError("a, b, r must be positive")
    grid = [float(R) for R in R_grid]
    if any(R <= 0 for R in grid) or any(y <= x for x, y in zip(grid, grid[1:])):
        raise ValueError("R_grid must be positive and strictly increasing")
    period = 2.0 * math.pi / b
    f = divergent_integrand(a, b, r)
    edges = np.union1d(period * np.arange(int(grid[-1] // period) + 1), grid)
    edges = edges[edges <= grid[-1]]
    res = gk_chunks(f, edges, tol / len(edges))
    if not np.all(res.converged):
        raise QuadratureError("divergence probe quadrature hit the depth cap")
    cum = np.concatenate([[0j], np.cumsum(res.values)])
    idx = np.searchsorted(edges, grid)
    raw = tuple(complex(cum[i]) for i in idx)
    stab = tuple(v - 0.5 * math.log1p((R / r) ** 2) for v, R in zip(raw, grid))

    g = lambda x: np.expm1(a * np.exp(1j * b * x)) * x / (x * x + r * r)  # noqa: E731
    sums = np.cumsum(gk_chunks(g, period * np.arange(DEFAULT_CHUNKS * 4 + 1.0), 1e-14).values)
    limit, err = accelerate_sequence(sums)
    return DivergenceProbe(tuple(grid), raw, stab, complex(limit), err)


def log_slope(R: Sequence[float], values: Sequence[complex]) -> float:
    """Least-squares slope of ``Re(values)`` against ``log R``."""
    x = np.log(np.asarray(R, dtype=float))
    y = np.real(np.asarray(values))
    return float(np.polyfit(x, y, 1)[0])
