"""Hot numeric kernels, dispatched to numba or numpy at import time.

Both implementations are always importable as :mod:`owid.kernels._numpy`
and (when numba is installed) :mod:`owid.kernels._numba`, so tests and the
benchmark can compare them directly.
"""

from .._backend import BACKEND, USE_NUMBA
from . import _numpy

if USE_NUMBA:
    from . import _numba as _impl
else:
    _impl = _numpy

jacobi_eigh = _impl.jacobi_eigh
eigvalsh_batch = _impl.eigvalsh_batch
post_measurement_batch = _impl.post_measurement_batch
measured_entropies = _impl.measured_entropies
conditional_entropies = _impl.conditional_entropies
reduced_values = _impl.reduced_values
reduced_grid_min = _impl.reduced_grid_min

__all__ = [
    "BACKEND",
    "jacobi_eigh",
    "eigvalsh_batch",
    "post_measurement_batch",
    "measured_entropies",
    "conditional_entropies",
    "reduced_values",
    "reduced_grid_min",
]
