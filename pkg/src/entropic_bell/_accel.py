"""Optional numba acceleration.

Set ``ENTROPIC_BELL_NO_NUMBA=1`` to force the pure-numpy kernels.  When numba
is not installed the numpy kernels are used regardless of the flag.
"""

import os

_FLAG = "ENTROPIC_BELL_NO_NUMBA"

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is optional
    _numba = None

NUMBA_AVAILABLE = _numba is not None
USE_NUMBA = NUMBA_AVAILABLE and os.environ.get(_FLAG, "").strip().lower() not in (
    "1",
    "true",
    "yes",
    "on",
)
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, identity decorator otherwise.

    Kernels are compiled whenever numba exists, so both paths stay importable
    for tests and the benchmark; ``USE_NUMBA`` only decides which one the
    library dispatches to.
    """
    if NUMBA_AVAILABLE:
        return _numba.njit(*args, **kwargs)

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def decorator(func):
        return func

    return decorator
