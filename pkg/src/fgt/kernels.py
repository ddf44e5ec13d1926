"""Kernel backend selection.

The compiled extension is preferred; the pure-Python module is a drop-in
fallback. Set FGT_PURE=1 to force the fallback (used by the benchmark and
the parity tests).
"""

import os

if os.environ.get("FGT_PURE") == "1":
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

closure = _impl.closure
product = _impl.product
conjugate = _impl.conjugate
is_closed = _impl.is_closed
element_class = _impl.element_class
centralizer = _impl.centralizer
normalizer = _impl.normalizer
commutators = _impl.commutators


def iter_bits(mask):
    """Yield the set bit positions of a mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low
