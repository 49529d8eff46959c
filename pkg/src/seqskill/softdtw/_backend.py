"""Kernel backend selection.

The compiled extension is preferred when importable. Set SEQSKILL_PURE=1 to
force the pure-numpy fallback (used by the benchmark and by equivalence
tests).
"""

import os

from . import _kernels_py

if os.environ.get("SEQSKILL_PURE", "") == "1":
    kernels = _kernels_py
    BACKEND = "pure-python"
else:
    try:
        from . import _kernels_cy as kernels  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        kernels = _kernels_py
        BACKEND = "pure-python"


def backend_name() -> str:
    return BACKEND
