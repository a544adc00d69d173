"""Optional numba acceleration.

Hot kernels are written twice: an ``@njit`` scalar-loop version and a
vectorised numpy twin.  ``USE_NUMBA`` selects which one the dispatchers call.
Set ``CAUCHYRECT_DISABLE_NUMBA=1`` to force the numpy path (numba is also
skipped automatically when it is not importable).
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

NUMBA_AVAILABLE = numba is not None
_FLAG = os.environ.get("CAUCHYRECT_DISABLE_NUMBA", "").strip().lower()
USE_NUMBA = NUMBA_AVAILABLE and _FLAG not in ("1", "true", "yes", "on")


def njit(func):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise."""
    if numba is None:  # pragma: no cover
        return func
    return numba.njit(cache=True, error_model="numpy")(func)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
