"""JIT switch.

Kernels are compiled with numba unless ``LUDUS_DISABLE_NUMBA`` is set to a
truthy value (or numba is not importable), in which case the pure-numpy
implementations in :mod:`ludus.kernels` are used instead.
"""

import os

_FLAG = os.environ.get("LUDUS_DISABLE_NUMBA", "").strip().lower()

try:
    import numba as nb
except ImportError:  # pragma: no cover - numba is a declared dependency
    nb = None

USE_NUMBA = nb is not None and _FLAG not in ("1", "true", "yes", "on")


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise the identity decorator."""
    if nb is None:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda func: func
    return nb.njit(*args, **kwargs)
