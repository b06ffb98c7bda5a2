"""Kernel backend selection.

Three hot kernels (edit distance, per-edge mutual-neighbourhood counting,
and the SMO solver) exist twice: a compiled Cython extension and a plain
Python/numpy fallback with identical semantics.  The compiled version is
used when it imported cleanly; set ``MCCLINK_BACKEND=pure`` to force the
fallback.
"""

import os

from mcclink import _pykernels

_forced = os.environ.get("MCCLINK_BACKEND", "").strip().lower()

if _forced == "pure":
    _impl = _pykernels
    BACKEND = "pure-python"
else:
    try:
        from mcclink import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _pykernels
        BACKEND = "pure-python"

indel_distance = _impl.indel_distance
mcc_counts = _impl.mcc_counts
smo_solve = _impl.smo_solve
