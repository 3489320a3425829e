"""Numeric return-map harness.

The compiled kernel is used when it was built; set ``LIENARD_PURE_PYTHON=1``
to force the pure-Python fallback.
"""

import os

if os.environ.get("LIENARD_PURE_PYTHON") == "1":
    from . import _kernel_py as _backend
    KERNEL_BACKEND = "python"
else:
    try:
        from . import _kernel as _backend
        KERNEL_BACKEND = "cython"
    except ImportError:
        from . import _kernel_py as _backend
        KERNEL_BACKEND = "python"

revolve = _backend.revolve
