"""Hot-loop kernels, compiled when available.

Set ``INTERGRAPH_PURE_PYTHON=1`` to force the pure-Python fallback.
"""
import os

from . import _pykernels as python

native = None
if not os.environ.get("INTERGRAPH_PURE_PYTHON"):
    try:
        from . import _ckernels as native
    except ImportError:
        native = None

BACKEND = "cython" if native is not None else "python"
_impl = native if native is not None else python

coset_closure = _impl.coset_closure
bfs_sweep = _impl.bfs_sweep


def backends():
    """Available kernel modules by name."""
    out = {"python": python}
    if native is not None:
        out["cython"] = native
    return out
