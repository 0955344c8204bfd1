"""Hot kernels for graded series arithmetic.

The compiled Cython module is used when it was built; otherwise the
pure-Python implementation is loaded.  Set ``PARACR_PURE_PYTHON=1`` to force
the fallback (used by the benchmark and the backend-parity tests).
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
mul_graded = _pykernels.mul_graded
diff_graded = _pykernels.diff_graded

if os.environ.get("PARACR_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels  # type: ignore[attr-defined]
    except ImportError:
        _ckernels = None
    if _ckernels is not None:
        BACKEND = "cython"
        mul_graded = _ckernels.mul_graded
        diff_graded = _ckernels.diff_graded

__all__ = ["BACKEND", "mul_graded", "diff_graded"]
