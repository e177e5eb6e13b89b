"""Pick the shuffle kernel at import time.

The compiled core is used when it was built; ``CFSERIES_PURE_PYTHON=1`` in
the environment forces the Python fallback.
"""

from __future__ import annotations

import os

from cfseries import _kernels_py

if os.environ.get("CFSERIES_PURE_PYTHON", "") not in ("", "0"):
    _compiled = None
else:
    try:
        from cfseries import _kernels as _compiled
    except ImportError:
        _compiled = None

if _compiled is not None:
    shuffle_numerators = _compiled.shuffle_numerators
    BACKEND = "compiled"
else:
    shuffle_numerators = _kernels_py.shuffle_numerators
    BACKEND = "python"

__all__ = ["BACKEND", "shuffle_numerators"]
