"""Backend selection for the hot loops.

The compiled extension ``_ckernels`` is used when it imports; otherwise the
NumPy twin in ``_pykernels``.  Set ``MAXSUMDIV_PURE_PYTHON=1`` to force the
fallback.
"""
import os

from . import _pykernels

python_backend = _pykernels
compiled_backend = None

if os.environ.get("MAXSUMDIV_PURE_PYTHON", "") not in ("", "0"):
    backend = _pykernels
else:
    try:
        from . import _ckernels as compiled_backend
    except ImportError:  # extension not built
        backend = _pykernels
    else:
        backend = compiled_backend

BACKEND = "compiled" if backend is compiled_backend else "python"

greedy_vertex = backend.greedy_vertex
best_pair = backend.best_pair
greedy_edge = backend.greedy_edge
best_swap = backend.best_swap
brute_force = backend.brute_force
