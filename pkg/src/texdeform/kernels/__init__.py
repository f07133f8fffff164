"""Backend dispatch for the numeric hot kernels.

Two interchangeable backends exist: a numba @njit one and a pure NumPy
fallback. The active backend is chosen once at import time from the
TEXDEFORM_NUMBA environment variable:

    unset / "auto"  use numba when importable, else NumPy
    "0" / "false"   force the NumPy fallback
    "1" / "true"    require numba (ImportError if missing)

`BACKEND` names the active choice; benchmarks/bench_kernels.py compares the
two on representative workloads.
"""

import os

from . import _numpy as numpy_backend


def _load_numba_backend():
    from . import _numba as numba_backend

    return numba_backend


def _select():
    flag = os.environ.get("TEXDEFORM_NUMBA", "auto").strip().lower()
    if flag in ("0", "false", "off", "numpy"):
        return "numpy", numpy_backend
    if flag in ("1", "true", "on", "numba"):
        return "numba", _load_numba_backend()
    try:
        return "numba", _load_numba_backend()
    except ImportError:
        return "numpy", numpy_backend


BACKEND, _active = _select()

multi_source_dijkstra = _active.multi_source_dijkstra
fit_cameras = _active.fit_cameras
projection_energy = _active.projection_energy

__all__ = [
    "BACKEND",
    "numpy_backend",
    "multi_source_dijkstra",
    "fit_cameras",
    "projection_energy",
]
