"""Hot numeric kernels, each with an ``@njit`` loop version and a numpy twin.

* real-axis integrands of the formula catalog (integer ``kind`` codes);
* batched adaptive GK15 over period chunks for those integrands;
* Aberth-Ehrlich simultaneous root iteration.

The public dispatchers (:func:`catalog_chunk_integrals`, :func:`aberth`) pick
the numba version unless ``CAUCHYRECT_DISABLE_NUMBA`` is set; the ``*_numba``
and ``*_numpy`` functions stay importable for benchmarks and parity tests.
"""

from __future__ import annotations

import math

import numpy as np

from . import _jit
from .quadrature import (EPS, GAUSS15, KRONROD15, MAX_DEPTH, NODES15,
                         ROUNDOFF_FACTOR, ChunkIntegrals, gk_chunks)

# Catalog integrand codes.  All carry the factor that decays like a rational
# function of x; parameters are always passed as (a, b, r, c).
EXP_SIN = 0    # e^{a cos bx} sin(a sin bx) x/(x²+r²)
SIN = 1        # x sin(bx)/(x²+r²)
SIN_SINH = 2   # sin(a cos bx) sinh(a sin bx) x/(x²+r²)
COS_SINH = 3   # cos(a cos bx) sinh(a sin bx) x/(x²+r²)
DENOM = 4      # x sin(bx) / ((x²+r²)(a²+2ac cos bx+c²))
LOG_COS = 5    # log(a²+2ac cos bx+c²)/(x²+r²)
LOG_SIN = 6    # x/(x²+r²) log((a²+2ac sin bx+c²)/(a²-2ac sin bx+c²))
KINDS = (EXP_SIN, SIN, SIN_SINH, COS_SINH, DENOM, LOG_COS, LOG_SIN)


@_jit.njit
def _integrand_point(kind, x, a, b, r, c):
    bx = b * x
    rat = x / (x * x + r * r)
    if kind == EXP_SIN:
        return math.exp(a * math.cos(bx)) * math.sin(a * math.sin(bx)) * rat
    if kind == SIN:
        return math.sin(bx) * rat
    if kind == SIN_SINH:
        return math.sin(a * math.cos(bx)) * math.sinh(a * math.sin(bx)) * rat
    if kind == COS_SINH:
        return math.cos(a * math.cos(bx)) * math.sinh(a * math.sin(bx)) * rat
    if kind == DENOM:
        return math.sin(bx) * rat / (a * a + 2.0 * a * c * math.cos(bx) + c * c)
    if kind == LOG_COS:
        return math.log(a * a + 2.0 * a * c * math.cos(bx) + c * c) / (x * x + r * r)
    if kind == LOG_SIN:
        s = 2.0 * a * c * math.sin(bx)
        q = a * a + c * c
        return rat * math.log((q + s) / (q - s))
    return math.nan


@_jit.njit
def catalog_integrand_numba(kind, x, a, b, r, c):
    out = np.empty(x.size)
    flat = x.ravel()
    for i in range(flat.size):
        out[i] = _integrand_point(kind, flat[i], a, b, r, c)
    return out.reshape(x.shape)


def catalog_integrand_numpy(kind, x, a, b, r, c):
    x = np.asarray(x, dtype=float)
    bx = b * x
    rat = x / (x * x + r * r)
    if kind == EXP_SIN:
        return np.exp(a * np.cos(bx)) * np.sin(a * np.sin(bx)) * rat
    if kind == SIN:
        return np.sin(bx) * rat
    if kind == SIN_SINH:
        return np.sin(a * np.cos(bx)) * np.sinh(a * np.sin(bx)) * rat
    if kind == COS_SINH:
        return np.cos(a * np.cos(bx)) * np.sinh(a * np.sin(bx)) * rat
    if kind == DENOM:
        return np.sin(bx) * rat / (a * a + 2.0 * a * c * np.cos(bx) + c * c)
    if kind == LOG_COS:
        return np.log(a * a + 2.0 * a * c * np.cos(bx) + c * c) / (x * x + r * r)
    if kind == LOG_SIN:
        s = 2.0 * a * c * np.sin(bx)
        q = a * a + c * c
        return rat * np.log((q + s) / (q - s))
    raise ValueError(f"unknown integrand kind {kind}")


def catalog_integrand(kind, x, a, b, r, c):
    if _jit.USE_NUMBA:
        return catalog_integrand_numba(kind, np.asarray(x, dtype=float), a, b, r, c)
    return catalog_integrand_numpy(kind, x, a, b, r, c)


@_jit.njit
def _gk15_panel(kind, a, b, r, c, lo, hi, nodes, wk, wg):
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    kron = 0.0
    gauss = 0.0
    resabs = 0.0
    for j in range(15):
        fx = _integrand_point(kind, centre + half * nodes[j], a, b, r, c)
        kron += wk[j] * fx
        gauss += wg[j] * fx
        resabs += wk[j] * abs(fx)
    return kron * half, abs((kron - gauss) * half), resabs * abs(half)


@_jit.njit
def chunk_integrals_numba(kind, a, b, r, c, edges, tol, max_depth,
                          nodes, wk, wg, roundoff):
    """Same acceptance rule as :func:`cauchyrect.quadrature.gk_chunks`, depth-first."""
    n = edges.size - 1
    values = np.zeros(n)
    errors = np.zeros(n)
    converged = np.ones(n, dtype=np.bool_)
    evals = 0
    cap = 4 * (max_depth + 2)
    stack_lo = np.empty(cap)
    stack_hi = np.empty(cap)
    stack_d = np.empty(cap, dtype=np.int64)
    for k in range(n):
        width = abs(edges[k + 1] - edges[k])
        if width == 0.0:
            continue
        top = 0
        stack_lo[0] = edges[k]
        stack_hi[0] = edges[k + 1]
        stack_d[0] = 0
        top = 1
        while top > 0:
            top -= 1
            lo = stack_lo[top]
            hi = stack_hi[top]
            d = stack_d[top]
            kron, err, resabs = _gk15_panel(kind, a, b, r, c, lo, hi, nodes, wk, wg)
            evals += 15
            if not math.isfinite(err):
                converged[k] = False
                values[k] = math.nan
                break
            allowed = tol * abs(hi - lo) / width
            if err <= allowed or err <= roundoff * resabs:
                values[k] += kron
                errors[k] += err
            elif d >= max_depth:
                values[k] += kron
                errors[k] += err
                converged[k] = False
            else:
                mid = 0.5 * (lo + hi)
                # push right first so the left half is processed next
                stack_lo[top] = mid
                stack_hi[top] = hi
                stack_d[top] = d + 1
                stack_lo[top + 1] = lo
                stack_hi[top + 1] = mid
                stack_d[top + 1] = d + 1
                top += 2
    return values, errors, converged, evals


def chunk_integrals_numpy(kind, a, b, r, c, edges, tol, max_depth=MAX_DEPTH):
    return gk_chunks(lambda x: catalog_integrand_numpy(kind, x, a, b, r, c),
                     edges, tol, max_depth)


def catalog_chunk_integrals(kind, params, edges, tol, max_depth=MAX_DEPTH,
                            use_numba: bool | None = None) -> ChunkIntegrals:
    """Integrals of catalog integrand ``kind`` over consecutive ``edges`` chunks."""
    a, b, r, c = (float(v) for v in params)
    edges = np.ascontiguousarray(edges, dtype=float)
    if use_numba is None:
        use_numba = _jit.USE_NUMBA
    if use_numba:
        values, errors, conv, evals = chunk_integrals_numba(
            int(kind), a, b, r, c, edges, float(tol), int(max_depth),
            NODES15, KRONROD15, GAUSS15, ROUNDOFF_FACTOR * EPS)
        return ChunkIntegrals(values, errors, int(evals), conv)
    return chunk_integrals_numpy(kind, a, b, r, c, edges, tol, max_depth)


# ---------------------------------------------------------------------------
# Aberth-Ehrlich
# ---------------------------------------------------------------------------

@_jit.njit
def _horner_with_derivative(coeffs, z):
    # coeffs descending
    p = coeffs[0]
    dp = 0.0 + 0.0j
    for k in range(1, coeffs.size):
        dp = dp * z + p
        p = p * z + coeffs[k]
    return p, dp


@_jit.njit
def aberth_numba(coeffs, z0, max_iter, tol):
    """Aberth iteration; ``coeffs`` descending and monic.  Returns (roots, iters)."""
    z = z0.copy()
    n = z.size
    for it in range(max_iter):
        biggest = 0.0
        for i in range(n):
            p, dp = _horner_with_derivative(coeffs, z[i])
            if p == 0:
                continue
            ratio = p / dp if dp != 0 else p
            s = 0.0 + 0.0j
            for j in range(n):
                if j != i:
                    diff = z[i] - z[j]
                    if diff != 0:
                        s += 1.0 / diff
            w = ratio / (1.0 - ratio * s)
            z[i] -= w
            step = abs(w) / (1.0 + abs(z[i]))
            if step > biggest:
                biggest = step
        if biggest < tol:
            return z, it + 1
    return z, max_iter


def aberth_numpy(coeffs, z0, max_iter, tol):
    """Jacobi-style (all roots updated together) twin of :func:`aberth_numba`."""
    z = np.array(z0, dtype=complex)
    coeffs = np.asarray(coeffs, dtype=complex)
    n = z.size
    for it in range(max_iter):
        p = np.zeros(n, dtype=complex) + coeffs[0]
        dp = np.zeros(n, dtype=complex)
        for ck in coeffs[1:]:
            dp = dp * z + p
            p = p * z + ck
        safe_dp = np.where(dp != 0, dp, 1.0)
        ratio = np.where(dp != 0, p / safe_dp, p)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        with np.errstate(divide="ignore"):
            inv = np.where(diff != 0, 1.0 / diff, 0.0)
        s = inv.sum(axis=1)
        w = np.where(p != 0, ratio / (1.0 - ratio * s), 0.0)
        z = z - w
        if np.max(np.abs(w) / (1.0 + np.abs(z))) < tol:
            return z, it + 1
    return z, max_iter


def aberth(coeffs, z0, max_iter=500, tol=1e-15, use_numba: bool | None = None):
    coeffs = np.ascontiguousarray(coeffs, dtype=complex)
    z0 = np.ascontiguousarray(z0, dtype=complex)
    if use_numba is None:
        use_numba = _jit.USE_NUMBA
    if use_numba:
        return aberth_numba(coeffs, z0, int(max_iter), float(tol))
    return aberth_numpy(coeffs, z0, int(max_iter), float(tol))
