"""Hot numeric kernels with a selectable backend.

The numba backend is used when numba imports cleanly. Setting
``DLGEODESIC_BACKEND=numpy`` forces the pure-numpy path (useful for
debugging and for the comparison in ``benchmarks/bench_kernels.py``).
Both backends are always importable as ``numpy_backend`` and, when
available, ``numba_backend``.
"""

import os

from . import _numpy as numpy_backend

try:
    from . import _numba as numba_backend
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_backend = None

_requested = os.environ.get("DLGEODESIC_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"DLGEODESIC_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numba" and numba_backend is not None:
    backend = numba_backend
    BACKEND = "numba"
else:
    backend = numpy_backend
    BACKEND = "numpy"

cell_costs = backend.cell_costs
slack = backend.slack
upper_hull = backend.upper_hull
concave_majorant = backend.concave_majorant
monotone_majorant = backend.monotone_majorant
pair_margins = backend.pair_margins
reduced_objective = backend.reduced_objective

__all__ = [
    "BACKEND",
    "backend",
    "numpy_backend",
    "numba_backend",
    "cell_costs",
    "slack",
    "upper_hull",
    "concave_majorant",
    "monotone_majorant",
    "pair_margins",
    "reduced_objective",
]
