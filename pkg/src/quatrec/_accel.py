"""Numba switch.

Hot loops are written once in plain-loop form and JIT compiled when numba is
importable.  Setting ``QUATREC_DISABLE_NUMBA=1`` forces the pure-numpy
fallbacks instead.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

DISABLED = os.environ.get("QUATREC_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")
HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not DISABLED


def njit(fn):
    """JIT compile ``fn`` if numba is installed, else return it unchanged."""
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True, fastmath=False)(fn)
