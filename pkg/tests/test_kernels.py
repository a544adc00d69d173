"""Compiled and numpy kernels must agree; the env flag must select numpy."""

import math
import os
import subprocess
import sys

import numpy as np
import pytest

from cauchyrect import _jit, kernels
from cauchyrect.quadrature import GAUSS15, KRONROD15, MAX_DEPTH, NODES15, ROUNDOFF_FACTOR

needs_numba = pytest.mark.skipif(not _jit.NUMBA_AVAILABLE, reason="numba not installed")

PARAMS = (0.8, 1.3, 0.7, 2.1)


@pytest.mark.parametrize("kind", kernels.KINDS)
def test_integrand_twins_agree(kind):
    x = np.linspace(0.01, 40, 997)
    a = kernels.catalog_integrand_numpy(kind, x, *PARAMS)
    if _jit.NUMBA_AVAILABLE:
        b = kernels.catalog_integrand_numba(kind, x, *PARAMS)
        np.testing.assert_allclose(a, b, rtol=1e-14, atol=1e-16)
    assert np.all(np.isfinite(a))


@needs_numba
@pytest.mark.parametrize("kind", kernels.KINDS)
def test_chunk_integrals_parity(kind):
    period = 2 * math.pi / PARAMS[1]
    edges = period * np.arange(33.0)
    fast = kernels.catalog_chunk_integrals(kind, PARAMS, edges, 1e-12, use_numba=True)
    slow = kernels.catalog_chunk_integrals(kind, PARAMS, edges, 1e-12, use_numba=False)
    np.testing.assert_allclose(fast.values, slow.values, rtol=1e-12, atol=1e-15)
    assert fast.evaluations == slow.evaluations
    assert fast.converged.all() and slow.converged.all()


@needs_numba
def test_numba_chunk_kernel_direct_call():
    edges = np.array([0.0, 1.0, 2.0])
    v, e, c, n = kernels.chunk_integrals_numba(kernels.SIN, 1.0, 1.0, 1.0, 0.0, edges, 1e-12,
                                               MAX_DEPTH, NODES15, KRONROD15, GAUSS15,
                                               ROUNDOFF_FACTOR)
    assert c.all() and n >= 30


@pytest.mark.parametrize("use_numba", [False, pytest.param(True, marks=needs_numba)])
def test_aberth_backends(use_numba):
    roots = np.array([1j, -1j, 2.0, -0.5 + 0.5j])
    desc = np.poly(roots).astype(complex)
    z0 = 1.5 * np.exp(1j * (2 * np.pi * np.arange(4) / 4 + 0.4))
    found, iters = kernels.aberth(desc, z0, use_numba=use_numba)
    for r in roots:
        assert np.min(np.abs(found - r)) < 1e-12
    assert iters < 500


def test_env_flag_selects_numpy():
    code = "from cauchyrect import _jit; print(_jit.USE_NUMBA, _jit.backend())"
    env = dict(os.environ, CAUCHYRECT_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True).stdout.split()
    assert out[0] == "False" and out[1] == "numpy"
