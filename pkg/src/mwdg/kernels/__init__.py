"""Hot-loop kernels with a compiled core and a pure-Python twin.

The data-dependent slope-limiting cascades are the one part of the code that
neither BLAS nor vectorization handles well once the per-row stop conditions
kick in, so they exist twice: a Cython extension (``_cascade``) and a numpy
fallback (``_cascade_py``) with identical signatures and bit-identical
results.  The extension is preferred when importable; set
``MWDG_PURE_PYTHON=1`` to force the fallback.  ``benchmarks/bench_kernels.py``
compares the two.
"""

import os

from . import _cascade_py

if os.environ.get("MWDG_PURE_PYTHON"):
    _impl = _cascade_py
    BACKEND = "python"
else:
    try:
        from . import _cascade as _impl  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        _impl = _cascade_py
        BACKEND = "python"

cascade_1d = _impl.cascade_1d
cascade_2d = _impl.cascade_2d

__all__ = ["cascade_1d", "cascade_2d", "BACKEND"]
