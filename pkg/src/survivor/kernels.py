"""Kernel backend selection.

The compiled extension (``survivor._kernels``) is used when it was built;
otherwise the pure-Python twins in ``survivor._pykernels`` are loaded.  Set
``SURVIVOR_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

python_backend = _pykernels

if os.environ.get("SURVIVOR_PURE_PYTHON", "") not in ("", "0"):
    compiled_backend = None
else:
    try:
        from . import _kernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

active = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

reach = active.reach
simple_paths = active.simple_paths
bonds = active.bonds


def best_pair(p1, b1, p2s, b2s, pf, tol=1e-12):
    if compiled_backend is not None and len(pf) <= 64:
        return compiled_backend.best_pair(p1, b1, p2s, b2s, pf, tol)
    return python_backend.best_pair(p1, b1, p2s, b2s, pf, tol)
