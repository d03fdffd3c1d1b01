"""Selects the dichotomy kernel implementation at import time.

The compiled extension is preferred; the pure-Python module is the
fallback and the behavioural reference.  Set ACDAA_PURE=1 to force the
fallback (used by the benchmark and the parity tests).
"""

from __future__ import annotations

import os

from . import _core_py

try:
    from . import _core  # compiled extension, optional
except ImportError:
    _core = None

if _core is not None and not os.environ.get("ACDAA_PURE"):
    _active = _core
    KERNEL_KIND = "compiled"
else:
    _active = _core_py
    KERNEL_KIND = "pure"

accumulate_frequencies = _active.accumulate_frequencies
accumulate_frequencies_py = _core_py.accumulate_frequencies
accumulate_frequencies_c = _core.accumulate_frequencies if _core is not None else None
HAVE_COMPILED = _core is not None
