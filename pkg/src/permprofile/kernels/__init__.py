"""Hot counting kernels with backend selection at import time.

The compiled Cython odometer is used when available; otherwise the
pure-Python reference implementation takes over with identical semantics.
Set PERMPROFILE_PURE_PYTHON=1 to force the fallback (used by the benchmark
and the cross-checking tests).
"""

import os
from math import factorial

import numpy as np

if os.environ.get("PERMPROFILE_PURE_PYTHON"):
    from . import _pycount as _impl

    BACKEND = "python"
else:
    try:
        from . import _ccount as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _pycount as _impl

        BACKEND = "python"

MAX_K = _impl.MAX_K


def _checked(perm, k, ndim):
    arr = np.ascontiguousarray(perm, dtype=np.int64)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array of values")
    n = arr.shape[-1]
    if not 1 <= k <= min(n, MAX_K):
        raise ValueError(f"need 1 <= k <= min(n, {MAX_K}), got k={k}, n={n}")
    return arr


def profile_counts(perm, k: int) -> np.ndarray:
    """Counts of all k! induced patterns of one permutation, lex order."""
    arr = _checked(perm, k, 1)
    out = np.zeros(factorial(k), dtype=np.int64)
    _impl.profile_counts(arr, k, out)
    return out


def profile_counts_batch(perms, k: int, out: np.ndarray | None = None) -> np.ndarray:
    """Counts of all k! induced patterns for each row of ``perms``."""
    arr = _checked(perms, k, 2)
    if out is None:
        out = np.zeros((arr.shape[0], factorial(k)), dtype=np.int64)
    else:
        out[:] = 0
    _impl.profile_counts_batch(arr, k, out)
    return out


def backend_for(name: str):
    """Fetch a specific backend module ("cython" or "python"), if present."""
    if name == "python":
        from . import _pycount

        return _pycount
    if name == "cython":
        from . import _ccount

        return _ccount
    raise ValueError(f"unknown backend {name!r}")
