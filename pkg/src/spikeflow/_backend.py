"""Kernel backend selection.

The compiled extension is preferred; set SPIKEFLOW_PURE_PYTHON=1 to force
the numpy fallback (used by the bit-equality tests and the benchmark).
"""
import os

if os.environ.get("SPIKEFLOW_PURE_PYTHON"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]

BACKEND = kernels.BACKEND_NAME
unit_paths = kernels.unit_paths
