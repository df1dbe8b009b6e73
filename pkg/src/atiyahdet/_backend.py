"""Kernel backend selection.

The compiled extension is preferred when importable; set the environment
variable ATIYAHDET_PURE_PYTHON=1 to force the pure-Python fallback.
"""

from __future__ import annotations

import os

if os.environ.get("ATIYAHDET_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

det_and_edge_product = _impl.det_and_edge_product
tetra_scan = _impl.tetra_scan


def backend_name() -> str:
    """Either "compiled" or "python"."""
    return _impl.BACKEND
