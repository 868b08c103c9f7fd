"""Hot arithmetic kernels on packed term dicts.

The compiled extension is used when it was built; otherwise the pure-Python
module is loaded. Setting ``CMC4_PURE_PYTHON=1`` forces the fallback.
"""

import importlib
import os

from . import _pykernels

_forced = os.environ.get("CMC4_PURE_PYTHON", "").strip() not in ("", "0")

try:
    if _forced:
        raise ImportError("pure Python kernels requested")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"

add = _impl.add
sub = _impl.sub
scale = _impl.scale
mul = _impl.mul
mulsub = _impl.mulsub
divexact = _impl.divexact
bareiss = _impl.bareiss
divides = _pykernels.divides


def load(name):
    """Return the kernel module for ``"python"`` or ``"cython"``."""
    if name == "python":
        return _pykernels
    if name == "cython":
        return importlib.import_module(__name__ + "._ckernels")
    raise ValueError(f"unknown kernel backend {name!r}")


def available():
    names = ["python"]
    try:
        load("cython")
        names.append("cython")
    except ImportError:
        pass
    return names
