"""Kernel backend selection.

Prefers the compiled extension when it is built; falls back to the numpy
implementation otherwise.  Set QCASIM_PURE_PYTHON=1 to force the fallback
(used by the benchmark and the backend-parity tests).
"""

from __future__ import annotations

import os

from . import _core_py

if os.environ.get("QCASIM_PURE_PYTHON") == "1":
    _impl = _core_py
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _core_py

BACKEND: str = _impl.BACKEND
eca_history = _impl.eca_history
apply_gate_statevector = _impl.apply_gate_statevector

__all__ = ["BACKEND", "eca_history", "apply_gate_statevector"]
