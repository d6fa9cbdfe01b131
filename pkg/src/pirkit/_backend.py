"""Kernel backend selection.

PIRKIT_BACKEND=auto|numba|numpy (default auto: numba when importable, else
the reference kernels).  Resolved lazily on first kernel use and cached, so
importing the package stays cheap and a bad value only surfaces for commands
that actually need kernels.  Tests that need one backend import its kernel
module directly or set the variable before first use.
"""

from __future__ import annotations

import logging
import os

log = logging.getLogger(__name__)

_CHOICES = ("auto", "numba", "numpy")


def _load():
    choice = os.environ.get("PIRKIT_BACKEND", "auto").strip().lower() or "auto"
    if choice not in _CHOICES:
        raise ValueError(f"PIRKIT_BACKEND must be one of {_CHOICES}, got {choice!r}")
    if choice in ("auto", "numba"):
        try:
            from . import _kernels_numba
            return _kernels_numba
        except ImportError:
            if choice == "numba":
                raise
            log.info("numba unavailable, using reference kernels")
    from . import _kernels_numpy
    return _kernels_numpy


_kernels = None


def get_kernels():
    """Resolve the backend on first use (numba JIT import is not free)."""
    global _kernels
    if _kernels is None:
        _kernels = _load()
    return _kernels


def backend_name() -> str:
    return get_kernels().NAME
