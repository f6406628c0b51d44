"""Select the double description kernel at import time.

The compiled extension is used when it was built; otherwise the pure-Python
module with the identical contract takes over.  Setting the environment
variable ``SPLITRANK_PURE_PYTHON=1`` forces the fallback (used by the
benchmark and by the kernel equivalence tests).
"""
import os

from . import _ddkernel_py

try:
    if os.environ.get("SPLITRANK_PURE_PYTHON"):
        raise ImportError("pure Python kernel requested")
    from . import _ddkernel as _impl
except ImportError:
    _impl = _ddkernel_py

BACKEND = _impl.BACKEND
dd_cone = _impl.dd_cone
adjacent_pairs = _impl.adjacent_pairs


def compiled_available() -> bool:
    try:
        from . import _ddkernel  # noqa: F401
    except ImportError:
        return False
    return True
