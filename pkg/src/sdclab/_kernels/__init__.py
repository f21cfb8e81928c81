"""Kernel backend selection: compiled extension when built, else pure Python.

Set SDCLAB_PURE_PYTHON=1 to force the fallback (used by the benchmark and
for debugging); both backends are bit-identical by contract.
"""

from __future__ import annotations

import os

if os.environ.get("SDCLAB_PURE_PYTHON") == "1":
    from sdclab._kernels import fallback as _impl

    BACKEND = "python"
else:
    try:
        from sdclab._kernels import _linkage as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from sdclab._kernels import fallback as _impl  # type: ignore[no-redef]

        BACKEND = "python"

nearest_records = _impl.nearest_records

__all__ = ["nearest_records", "BACKEND"]
