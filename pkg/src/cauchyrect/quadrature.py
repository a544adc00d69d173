"""Quadrature building blocks: adaptive Gauss-Kronrod and tanh-sinh.

Everything here works on vectorised callables ``f(x: ndarray) -> ndarray``
(real or complex valued).  The adaptive routine processes every pending
subinterval of every chunk in a single batched evaluation per sweep, and
accumulates accepted panels in a fixed order so results are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import QuadratureError

# 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15 tables).
# Abscissae are the non-negative half, largest first; index 7 is the centre.
XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
# Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# Full 15-node layout on [-1, 1]: -x0..-x6, 0, x6..x0.
NODES15 = np.concatenate([-XGK[:7], [0.0], XGK[6::-1]])
KRONROD15 = np.concatenate([WGK[:7], [WGK[7]], WGK[6::-1]])
GAUSS15 = np.zeros(15)
GAUSS15[[1, 3, 5]] = WG[:3]
GAUSS15[7] = WG[3]
GAUSS15[[9, 11, 13]] = WG[2::-1]

MAX_DEPTH = 30
EPS = np.finfo(float).eps
# An interval whose Kronrod/Gauss gap is below this multiple of eps * ∫|f|
# is treated as converged: the tolerance is below the roundoff floor.
ROUNDOFF_FACTOR = 50.0


@dataclass(frozen=True)
class QuadratureResult:
    value: complex | float
    error_estimate: float
    evaluations: int
    converged: bool

    def __post_init__(self):
        if not self.error_estimate >= 0.0:
            raise ValueError("error_estimate must be non-negative")


@dataclass(frozen=True)
class ChunkIntegrals:
    """Per-chunk output of :func:`gk_chunks`."""

    values: np.ndarray
    errors: np.ndarray
    evaluations: int
    converged: np.ndarray  # bool per chunk


def gk_chunks(f: Callable[[np.ndarray], np.ndarray], edges, tol: float,
              max_depth: int = MAX_DEPTH) -> ChunkIntegrals:
    """Integrate ``f`` over every ``[edges[k], edges[k+1]]`` to absolute ``tol`` each.

    Locally adaptive bisection: a subinterval of width ``w`` inside a chunk of
    width ``W`` is accepted once its |K15 - G7| gap is at most ``tol * w / W``
    (or below the roundoff floor).  Subintervals still failing at
    ``max_depth`` are accepted anyway and their chunk is flagged unconverged.
    """
    edges = np.asarray(edges, dtype=float)
    n_chunks = len(edges) - 1
    if n_chunks < 1:
        raise ValueError("need at least two edges")
    if not tol > 0:
        raise ValueError("tol must be positive")

    widths = np.abs(edges[1:] - edges[:-1])
    lo = edges[:-1].copy()
    hi = edges[1:].copy()
    owner = np.arange(n_chunks)
    depth = np.zeros(n_chunks, dtype=np.int64)

    values = None
    errors = np.zeros(n_chunks)
    converged = np.ones(n_chunks, dtype=bool)
    evaluations = 0

    while lo.size:
        centre = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        x = centre[:, None] + half[:, None] * NODES15[None, :]
        fx = np.asarray(f(x.ravel())).reshape(x.shape)
        evaluations += fx.size
        if values is None:
            values = np.zeros(n_chunks, dtype=np.result_type(fx.dtype, float))
        kron = (fx @ KRONROD15) * half
        gauss = (fx @ GAUSS15) * half
        resabs = (np.abs(fx) @ KRONROD15) * np.abs(half)
        err = np.abs(kron - gauss)
        if not np.all(np.isfinite(err)):
            raise QuadratureError("integrand produced non-finite values")

        allowed = tol * np.abs(hi - lo) / np.where(widths[owner] > 0, widths[owner], 1.0)
        floor = ROUNDOFF_FACTOR * EPS * resabs
        accept = (err <= allowed) | (err <= floor)
        stuck = ~accept & (depth >= max_depth)
        done = accept | stuck

        if np.any(done):
            np.add.at(values, owner[done], kron[done])
            np.add.at(errors, owner[done], err[done])
            converged[owner[stuck]] = False

        keep = ~done
        mid = centre[keep]
        lo = np.concatenate([lo[keep], mid])
        hi = np.concatenate([mid, hi[keep]])
        owner = np.concatenate([owner[keep], owner[keep]])
        depth = np.concatenate([depth[keep] + 1, depth[keep] + 1])
        order = np.lexsort((lo, owner))
        lo, hi, owner, depth = lo[order], hi[order], owner[order], depth[order]

    return ChunkIntegrals(values, errors, evaluations, converged)


def integrate_interval(f, lo: float, hi: float, tol: float,
                       max_depth: int = MAX_DEPTH, strict: bool = True) -> QuadratureResult:
    """Adaptive GK15 over a single interval."""
    res = gk_chunks(f, [lo, hi], tol, max_depth)
    value = res.values[0]
    out = QuadratureResult(value.item(), float(res.errors[0]), res.evaluations,
                           bool(res.converged[0]))
    if strict and not out.converged:
        raise QuadratureError(
            f"adaptive quadrature on [{lo}, {hi}] hit depth cap {max_depth}", out)
    return out


# ---------------------------------------------------------------------------
# tanh-sinh (double exponential)
# ---------------------------------------------------------------------------

def _ts_level_nodes(h: float, odd_only: bool, half: float, min_gap: float):
    """Nodes of one tanh-sinh level as (gap_left, gap_right, weight).

    Gaps are distances from the two endpoints, computed without cancellation
    so endpoint singularities can be evaluated right up to ``min_gap``.
    """
    # 1 - tanh(s) ~ 2 exp(-2s); stop once half * gap < min_gap.
    s_max = 0.5 * math.log(2.0 * half / min_gap) if half > min_gap else 0.0
    t_max = math.asinh(2.0 * s_max / math.pi)
    k_max = int(t_max / h)
    k = np.arange(-k_max, k_max + 1)
    if odd_only:
        k = k[k % 2 != 0]
    t = k * h
    s = 0.5 * math.pi * np.sinh(t)
    e = np.exp(-2.0 * np.abs(s))
    # one_minus = 1 - tanh|s|, one_plus = 1 + tanh|s|
    one_minus = 2.0 * e / (1.0 + e)
    one_plus = 2.0 / (1.0 + e)
    gap_left = half * np.where(s < 0, one_minus, one_plus)
    gap_right = half * np.where(s < 0, one_plus, one_minus)
    sech2 = 4.0 * e / (1.0 + e) ** 2
    w = h * 0.5 * math.pi * np.cosh(t) * sech2 * half
    keep = (gap_left >= min_gap) & (gap_right >= min_gap)
    return gap_left[keep], gap_right[keep], w[keep]


def tanh_sinh(f, lo: float, hi: float, tol: float = 1e-12, max_level: int = 12,
              min_gap: float | None = None, strict: bool = True) -> QuadratureResult:
    """Tanh-sinh quadrature on a finite interval; tolerates endpoint singularities.

    Level ``k`` uses step ``2**-k``; odd nodes are added at each refinement so
    earlier evaluations are reused.  Stops when two successive levels agree
    to ``tol``.
    """
    if hi == lo:
        return QuadratureResult(0.0, 0.0, 0, True)
    if hi < lo:
        r = tanh_sinh(f, hi, lo, tol, max_level, min_gap, strict)
        return QuadratureResult(-r.value, r.error_estimate, r.evaluations, r.converged)
    half = 0.5 * (hi - lo)
    if min_gap is None:
        min_gap = 4.0 * EPS * max(1.0, abs(lo), abs(hi))

    def weighted_sum(h, odd_only):
        gl, gr, w = _ts_level_nodes(h, odd_only, half, min_gap)
        # evaluate from the nearer endpoint to keep the abscissa accurate
        x = np.where(gl <= gr, lo + gl, hi - gr)
        fx = np.asarray(f(x))
        if not np.all(np.isfinite(fx)):
            raise QuadratureError("tanh-sinh integrand produced non-finite values")
        return np.sum(w * fx), x.size

    h = 1.0
    estimate, evals = weighted_sum(h, False)
    err = math.inf
    for level in range(1, max_level + 1):
        h *= 0.5
        part, n = weighted_sum(h, True)
        evals += n
        # weights scale with h, so the coarse sum halves
        refined = 0.5 * estimate + part
        err = abs(refined - estimate)
        estimate = refined
        if err <= tol and level >= 3:
            return QuadratureResult(_as_scalar(estimate), float(err), evals, True)
    out = QuadratureResult(_as_scalar(estimate), float(err), evals, False)
    if strict:
        raise QuadratureError("tanh-sinh did not converge", out)
    return out


def half_line(f, lo: float, tol: float = 1e-12, **kwargs) -> QuadratureResult:
    """``∫_lo^∞ f`` through ``x = lo + s/(1-s)`` and tanh-sinh on ``s ∈ [0, 1)``.

    Suitable for integrands decaying at least like ``x**-2``.
    """
    def mapped(s):
        one_minus = 1.0 - s
        return f(lo + s / one_minus) / one_minus ** 2

    kwargs.setdefault("min_gap", 4.0 * EPS)
    return tanh_sinh(mapped, 0.0, 1.0, tol, **kwargs)


def _as_scalar(v):
    v = np.asarray(v)
    return v.item()
