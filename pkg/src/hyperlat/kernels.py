"""Kernel backend selection.

The compiled extension is used when importable; set HYPERLAT_PURE=1 to
force the reference implementations.
"""
import os

from . import _pykernels

if os.environ.get("HYPERLAT_PURE") == "1":
    _impl = _pykernels
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "compiled" if _impl is not _pykernels else "python"

kronecker = _impl.kronecker
dirichlet_class_number = _impl.dirichlet_class_number
reduced_form_count = _impl.reduced_form_count
smith_invariants = _impl.smith_invariants
