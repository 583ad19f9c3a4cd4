"""Kernel acceleration switch.

Hot loops are written twice: a numba ``@njit`` kernel and a pure-numpy
variant.  Setting ``PTMATHIEU_DISABLE_NUMBA=1`` in the environment (or running
without numba installed) selects the numpy path.  The choice is made once at
import time.
"""

import os

_DISABLED = os.environ.get("PTMATHIEU_DISABLE_NUMBA", "").strip().lower() in (
    "1",
    "true",
    "yes",
    "on",
)

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and not _DISABLED


def njit(*args, **kws):
    """``numba.njit`` with caching, or a no-op decorator when numba is absent.

    Kernels decorated here are still importable (and callable, slowly) on the
    numpy path, which keeps the parity tests and the benchmark runnable.
    """
    if numba is None:
        if len(args) == 1 and callable(args[0]) and not kws:
            return args[0]
        return lambda fn: fn
    kws.setdefault("cache", True)
    return numba.njit(*args, **kws)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
