"""Backend selection for the bitmask kernels.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``GRAPHREG_PURE_PYTHON`` is set to a non-empty value,
the pure-Python implementation is loaded.  Graphs wider than a machine word
always go to the Python kernels, which work on arbitrary-size ints.
"""

import os

from . import _kernels_py

_fast = None
if not os.environ.get("GRAPHREG_PURE_PYTHON"):
    try:
        from . import _kernels as _fast
    except ImportError:
        _fast = None

BACKEND = "python" if _fast is None else "cython"
WORD_LIMIT = 63


def _pick(n):
    return _fast if _fast is not None and n <= WORD_LIMIT else _kernels_py


def classify_mask(pred, n, s):
    return _pick(n).classify_mask(pred, n, s)


def closure_mask(pred, n, s):
    return _pick(n).closure_mask(pred, n, s)


def hs_scan(pred, n):
    return _pick(n).hs_scan(pred, n)


__all__ = ["BACKEND", "classify_mask", "closure_mask", "hs_scan"]
