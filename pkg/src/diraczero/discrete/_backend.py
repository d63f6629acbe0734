"""Pick the compiled kernels when importable, else the numpy fallback.

Set ``DIRACZERO_PURE_PYTHON=1`` to force the fallback.
"""
import os

BACKEND = "python"
if os.environ.get("DIRACZERO_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as kernels

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as kernels
else:
    from . import _kernels_py as kernels

apply_dirac = kernels.apply_dirac
row_norms = kernels.row_norms

__all__ = ["BACKEND", "apply_dirac", "row_norms", "kernels"]
