"""Backend selection for the pair-sum kernels.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``MAXMULT_PURE_PYTHON`` is set to a non-empty value other
than ``0``, the NumPy fallback is used. ``BACKEND`` names the active choice.
"""

import os

from . import _pykernels as python_backend

try:
    from . import _ckernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

_forced = os.environ.get("MAXMULT_PURE_PYTHON", "") not in ("", "0")

if compiled_backend is not None and not _forced:
    _impl = compiled_backend
    BACKEND = "cython"
else:
    _impl = python_backend
    BACKEND = "python"

hoelder_max = _impl.hoelder_max
frac_double_sum = _impl.frac_double_sum

__all__ = ["BACKEND", "hoelder_max", "frac_double_sum", "python_backend", "compiled_backend"]
