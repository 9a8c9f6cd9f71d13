"""Backend selection for the per-event hot loops.

The compiled extension is preferred when it imported cleanly; otherwise
the numpy implementation takes over. ``PULSEGRAM_BACKEND=numpy`` forces
the fallback, which is handy for benchmarking the two against each other.
Both backends produce identical integer results.
"""

import os

from . import numpy_backend

try:
    from . import _core as _compiled
except ImportError:
    _compiled = None

if _compiled is not None and os.environ.get("PULSEGRAM_BACKEND") != "numpy":
    _active = _compiled
    BACKEND = "cython"
else:
    _active = numpy_backend
    BACKEND = "numpy"


def available_backends() -> dict:
    out = {"numpy": numpy_backend}
    if _compiled is not None:
        out["cython"] = _compiled
    return out


pixel_counts = _active.pixel_counts
tile_bin_counts = _active.tile_bin_counts
