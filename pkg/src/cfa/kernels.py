"""Backend selection for the counting kernel.

The compiled extension is used when it was built and ``CFA_PURE`` is unset;
otherwise the pure-Python kernel runs.  Overflow in the 64-bit path falls back
to the unbounded one transparently.
"""

import os

from . import _pykernels

try:
    if os.environ.get("CFA_PURE"):
        raise ImportError("pure backend requested")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"


def count_table(offsets, targets, kind, nstates, start, word):
    if _ckernels is not None:
        try:
            return _ckernels.count_table(offsets, targets, kind, nstates, start, word)
        except OverflowError:
            pass
    return _pykernels.count_table(offsets, targets, kind, nstates, start, word)
