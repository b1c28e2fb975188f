"""Hot-kernel dispatch: compiled extension when available, numpy otherwise.

Set TFI_NO_EXT=1 to force the pure-python fallback (used by the parity
tests and the benchmark).
"""

import os

from . import _fallback

if os.environ.get("TFI_NO_EXT"):
    _impl = _fallback
    HAVE_COMPILED = False
else:
    try:
        from . import _corr as _impl  # type: ignore[attr-defined]
        HAVE_COMPILED = True
    except ImportError:
        _impl = _fallback
        HAVE_COMPILED = False

detector_stats = _impl.detector_stats
nearest_labels = _impl.nearest_labels

__all__ = ["detector_stats", "nearest_labels", "HAVE_COMPILED"]
