"""Selects between numba-compiled kernels and the pure numpy fallback.

Set ``MICROMASER_NUMBA=0`` before import to force the numpy path.
"""
import os

_FLAG = os.environ.get("MICROMASER_NUMBA", "1").strip().lower()
REQUESTED = _FLAG not in ("0", "false", "no", "off")

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = REQUESTED and HAVE_NUMBA


def njit(func):
    """``numba.njit`` with the options every kernel uses, or a no-op."""
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True, nogil=True)(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
