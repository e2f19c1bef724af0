"""Optional numba acceleration.

Every hot kernel exists twice: a loop version compiled with ``numba.njit``
and a vectorized numpy version.  ``NICER_EARS_NO_JIT=1`` selects the numpy
path; it is also used automatically when numba is not importable.
"""

from __future__ import annotations

import os

FLAG = "NICER_EARS_NO_JIT"

try:  # pragma: no cover - exercised implicitly
    import numba as _numba
except ImportError:  # pragma: no cover
    _numba = None

HAVE_NUMBA = _numba is not None


def jit_disabled() -> bool:
    return os.environ.get(FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


USE_JIT = HAVE_NUMBA and not jit_disabled()


def njit(fn):
    """Compile ``fn`` lazily with numba (cached on disk); identity without numba."""
    if _numba is None:
        return fn
    return _numba.njit(cache=True)(fn)


def select(jitted, fallback):
    return jitted if USE_JIT else fallback
