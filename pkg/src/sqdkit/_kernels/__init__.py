"""Projected-Hamiltonian kernel backend selection.

The Slater-Condon matrix build is the hot loop of every QSCI/SQD run, so it
ships both as a compiled Cython extension and as a pure-Python/numpy
fallback with identical semantics.  The compiled backend is picked at
import when available; set ``SQDKIT_PURE_PYTHON=1`` to force the fallback
(used by the parity tests and the benchmark).
"""
import os

if os.environ.get("SQDKIT_PURE_PYTHON", "") not in ("", "0"):
    from . import _slater_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _slater_cy as _impl

        BACKEND = "cython"
    except ImportError:
        from . import _slater_py as _impl

        BACKEND = "python"

build_dense_matrix = _impl.build_dense_matrix
build_coo_entries = _impl.build_coo_entries

__all__ = ["BACKEND", "build_dense_matrix", "build_coo_entries"]
