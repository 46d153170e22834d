"""Backend selection for the scalar hot loops.

The compiled extension is used when it was built; otherwise the pure-Python
twin is used. Both expose the same three functions.
"""
from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled

BACKEND = "compiled" if _compiled is not None else "python"
_impl = _BACKENDS[BACKEND]


def available_backends():
    return sorted(_BACKENDS)


def get_backend(name=None):
    """Return the kernel module for ``name`` (default: the active backend)."""
    if name is None:
        return _impl
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable kernel backend {name!r}") from None


def set_backend(name):
    """Switch the process-wide backend; returns the previous name."""
    global BACKEND, _impl
    previous = BACKEND
    _impl = get_backend(name)
    BACKEND = name
    return previous


def merge_sorted_comb(q, w, tol):
    return _impl.merge_sorted_comb(q, w, tol)


def landauer_r_objective(r, d):
    return _impl.landauer_r_objective(r, d)


def golden_max_r(d, a, b, tol):
    return _impl.golden_max_r(d, a, b, tol)
