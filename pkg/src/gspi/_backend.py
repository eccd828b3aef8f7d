"""Pick the compiled core when it imports, else the pure-Python fallback.

Set ``GSPI_PURE_PYTHON=1`` to force the fallback (used by the benchmark and
by the cross-backend tests).
"""
import os

from . import _pycore

try:
    from . import _core as _compiled
except ImportError:  # extension not built
    _compiled = None


def get_backend(name=None):
    """Return the core module called ``name`` ("cython" or "python")."""
    if name is None:
        return core
    if name == "python":
        return _pycore
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled core gspi._core is not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def available_backends():
    return ["cython", "python"] if _compiled is not None else ["python"]


if _compiled is not None and not os.environ.get("GSPI_PURE_PYTHON"):
    core = _compiled
    BACKEND = "cython"
else:
    core = _pycore
    BACKEND = "python"
