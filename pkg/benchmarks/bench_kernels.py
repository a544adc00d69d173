"""Numba kernels against their numpy twins.

    python benchmarks/bench_kernels.py [--repeat N]

Both backends are called explicitly, so the CAUCHYRECT_DISABLE_NUMBA flag
does not matter here; without numba installed only the numpy rows run.
"""

import argparse
import math
import time

import numpy as np

from cauchyrect import _jit, kernels


def best_of(fn, repeat):
    fn()  # warm-up (JIT compilation on the numba side)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def chunk_case(kind, params, n_periods, tol):
    period = 2.0 * math.pi / params[1]
    edges = np.arange(n_periods + 1) * period
    return lambda use: (lambda: kernels.catalog_chunk_integrals(kind, params, edges, tol, use_numba=use))


def aberth_case(degree, seed=0):
    rng = np.random.default_rng(seed)
    roots = rng.normal(size=degree) + 1j * rng.normal(size=degree)
    coeffs = np.poly(roots).astype(complex)
    z0 = np.exp(2j * np.pi * (np.arange(degree) + 0.25) / degree) * 1.5
    return lambda use: (lambda: kernels.aberth(coeffs, z0, use_numba=use))


CASES = [
    ("chunks EXP_SIN, 512 periods, tol 1e-12", chunk_case(kernels.EXP_SIN, (1, 1, 1, 0), 512, 1e-12)),
    ("chunks LOG_SIN, 512 periods, tol 1e-12", chunk_case(kernels.LOG_SIN, (1, 1, 1, 2), 512, 1e-12)),
    ("chunks DENOM, 128 periods, tol 1e-14", chunk_case(kernels.DENOM, (1, 2, 0.5, 1.5), 128, 1e-14)),
    ("aberth, degree 12", aberth_case(12)),
    ("aberth, degree 60", aberth_case(60)),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    print(f"numba available: {_jit.NUMBA_AVAILABLE}")
    print(f"{'case':44s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s} {'max diff':>10s}")
    for name, make in CASES:
        t_np, out_np = best_of(make(False), args.repeat)
        row = f"{name:44s} {1e3 * t_np:10.3f}"
        if _jit.NUMBA_AVAILABLE:
            t_nb, out_nb = best_of(make(True), args.repeat)
            if isinstance(out_np, tuple):      # aberth: (roots, iterations)
                diff = max(min(abs(z - w) for w in out_nb[0]) for z in out_np[0])
            else:
                diff = float(np.max(np.abs(out_np.values - out_nb.values)))
            row += f" {1e3 * t_nb:10.3f} {t_np / t_nb:8.1f} {diff:10.2e}"
        print(row)


if __name__ == "__main__":
    main()
