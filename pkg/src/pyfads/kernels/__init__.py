"""Hot kernels with a compiled core and a pure-Python fallback.

The compiled extension ``_ckernels`` is used when it was built; otherwise
``_pykernels`` is imported. Setting ``PYFADS_KERNELS=python`` forces the
fallback. Both expose ``cluster``, ``helix_exit`` and ``spin`` with identical
signatures and bit-identical results.
"""

import os
from importlib import import_module

from . import _pykernels

_impl = _pykernels
BACKEND = "python"
if os.environ.get("PYFADS_KERNELS", "").lower() != "python":
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        pass

cluster = _impl.cluster
helix_exit = _impl.helix_exit
spin = _impl.spin


def available_backends():
    names = ["python"]
    try:
        import_module(f"{__name__}._ckernels")
        names.insert(0, "cython")
    except ImportError:
        pass
    return names


def get_backend(name=None):
    """Return the kernel module for ``name`` ("cython" or "python").

    ``None`` returns the backend selected at import.
    """
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        return import_module(f"{__name__}._ckernels")
    raise ValueError(f"unknown kernel backend {name!r}")
