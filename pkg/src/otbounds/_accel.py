"""Optional numba acceleration.

Hot numeric kernels are compiled with ``numba.njit`` unless the environment
variable ``OTBOUNDS_DISABLE_NUMBA`` is set to a non-empty value other than
``"0"``, in which case the same source runs as plain Python/numpy.  The switch
is read once at import time.
"""

from __future__ import annotations

import os

NUMBA_ENABLED = os.environ.get("OTBOUNDS_DISABLE_NUMBA", "0") in ("", "0")

if NUMBA_ENABLED:
    try:
        from numba import njit as _njit
    except ImportError:  # pragma: no cover - numba is a hard dependency
        NUMBA_ENABLED = False

if NUMBA_ENABLED:

    def maybe_njit(*args, **kwargs):
        kwargs.setdefault("cache", True)
        if args and callable(args[0]):
            return _njit(cache=True)(args[0])
        return _njit(*args, **kwargs)

else:

    def maybe_njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap
