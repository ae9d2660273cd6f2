"""Kernel backend selection.

The compiled Cython extension is used when it imported successfully and the
``ROTINV_PURE_PYTHON`` environment variable is unset; otherwise the NumPy
reference implementation takes over.  Both expose the same four functions,
and ``BACKEND`` records which one is live.
"""
import os

from . import reference

if os.environ.get("ROTINV_PURE_PYTHON"):
    _impl = reference
    BACKEND = "reference"
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = reference
        BACKEND = "reference"

word_value = _impl.word_value
word_grads = _impl.word_grads
sandwich_value = _impl.sandwich_value
sandwich_grads = _impl.sandwich_grads

__all__ = [
    "BACKEND",
    "reference",
    "word_value",
    "word_grads",
    "sandwich_value",
    "sandwich_grads",
]
