"""Backend selection for the hot numeric kernels.

Set ``OWID_DISABLE_NUMBA=1`` before importing :mod:`owid` to force the
pure-numpy code path. If numba is not importable the numpy path is used
regardless.
"""

import os
import warnings

_FALSY = {"", "0", "false", "no", "off"}

NUMBA_REQUESTED = os.environ.get("OWID_DISABLE_NUMBA", "").strip().lower() in _FALSY

# old system TBB; numba falls back to another threading layer on its own
warnings.filterwarnings("ignore", message="The TBB threading layer requires")

try:
    import numba

    # try TBB last so an outdated system copy is never probed
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_REQUESTED and NUMBA_AVAILABLE
BACKEND = "numba" if USE_NUMBA else "numpy"


def set_num_threads(n):
    """Bound numba's worker pool; a no-op on the numpy backend."""
    if not USE_NUMBA or n is None:
        return
    import numba

    numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))
