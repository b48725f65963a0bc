"""Numba switch for the hot kernels.

Set ``K4E_NO_NUMBA=1`` before import to run every kernel as plain
Python/numpy.  The pure path gives identical results and exists for
auditing and for platforms without numba.
"""

from __future__ import annotations

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_DISABLED = os.environ.get("K4E_NO_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

USE_NUMBA: bool = numba is not None and not _DISABLED


def njit(fn=None, *, inline: bool = False):
    """``numba.njit(cache=True)`` when enabled, otherwise the function itself."""
    if fn is None:
        return lambda f: njit(f, inline=inline)
    if USE_NUMBA:
        opts = {"inline": "always"} if inline else {}
        return numba.njit(cache=True, **opts)(fn)
    return fn


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
