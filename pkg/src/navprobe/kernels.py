"""Select the compiled kernels when available, else the pure-Python ones.

Set ``NAVPROBE_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("NAVPROBE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

distances_from = _impl.distances_from
lex_path = _impl.lex_path

__all__ = ["BACKEND", "distances_from", "lex_path"]
