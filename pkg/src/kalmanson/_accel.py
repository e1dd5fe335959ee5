"""Numba toggle.

Set ``KALMANSON_NO_NUMBA=1`` (or numba's own ``NUMBA_DISABLE_JIT=1``) to force
the pure-numpy kernels. Without numba installed the numpy path is used anyway.
"""
import os

_FALSY = {"", "0", "false", "no", "off"}


def _flag(name):
    return os.environ.get(name, "").strip().lower() not in _FALSY


try:
    if _flag("KALMANSON_NO_NUMBA") or _flag("NUMBA_DISABLE_JIT"):
        raise ImportError
    import numba

    njit = numba.njit(cache=True, nogil=True)
    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False

    def njit(f):
        return f


BACKEND = "numba" if HAVE_NUMBA else "numpy"
