"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the pure-Python
module takes over. Setting ``EXCLUSION_SPECTRA_PURE=1`` forces the fallback.
"""
import os

from . import _kernels_py

BACKENDS = {"python": _kernels_py}

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None
else:
    BACKENDS["cython"] = _compiled

if _compiled is not None and not os.environ.get("EXCLUSION_SPECTRA_PURE"):
    BACKEND = "cython"
else:
    BACKEND = "python"

_active = BACKENDS[BACKEND]

uep_offdiag = _active.uep_offdiag
lep_offdiag = _active.lep_offdiag
uep_walk = _active.uep_walk
lep_walk = _active.lep_walk


def get_backend(name=None):
    """Return the kernel module called ``name`` (the active one by default)."""
    if name is None:
        return _active
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available") from None
