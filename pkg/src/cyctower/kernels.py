"""Select the compiled character-sum kernels, falling back to pure Python.

Set ``CYCTOWER_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("CYCTOWER_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

affine_count_fp = _impl.affine_count_fp
affine_count_fp2 = _impl.affine_count_fp2

__all__ = ["BACKEND", "affine_count_fp", "affine_count_fp2"]
