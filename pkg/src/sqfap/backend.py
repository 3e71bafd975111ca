"""Kernel backend selection.

The hot inner loops (sieve segments, phase-indexed sums, pair counts) exist
in two interchangeable implementations: numba ``@njit`` loops and vectorized
numpy.  The active one is chosen once, at import time, from the environment:

* ``SQFAP_BACKEND=numba``  force numba (ImportError if it is not installed)
* ``SQFAP_BACKEND=numpy``  force the pure-numpy path
* unset / ``auto``         numba when importable, numpy otherwise

``benchmarks/bench_kernels.py`` times both paths side by side.
"""

import os

_requested = os.environ.get("SQFAP_BACKEND", "auto").strip().lower()

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

if _requested in ("", "auto"):
    USE_NUMBA = HAVE_NUMBA
elif _requested == "numba":
    if not HAVE_NUMBA:
        raise ImportError("SQFAP_BACKEND=numba requested but numba is not installed")
    USE_NUMBA = True
elif _requested in ("numpy", "python"):
    USE_NUMBA = False
else:
    raise ValueError(f"unrecognized SQFAP_BACKEND value {_requested!r}")

BACKEND = "numba" if USE_NUMBA else "numpy"
