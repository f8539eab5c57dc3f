"""Select the compiled kernel when it is importable, else the Python one.

Set ``RAUZY_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernel

BACKEND = "python"

if os.environ.get("RAUZY_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernel
else:
    try:
        from . import _ckernel as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernel

combination_sign = _impl.combination_sign
max_abs_index = _impl.max_abs_index
backward_run = _impl.backward_run

TOP = _pykernel.TOP
BOTTOM = _pykernel.BOTTOM


def backends():
    """All importable implementations, keyed by name (used by tests and benchmarks)."""
    out = {"python": _pykernel}
    try:
        from . import _ckernel

        out["cython"] = _ckernel
    except ImportError:
        pass
    return out
