"""Pure-numpy implementations of the hot kernels.

Same signatures as the compiled module `_core`; which one is in use is
decided in `qcasim._kernels` at import time.  Keep the two in sync: the
benchmark and the backend-parity tests compare them directly.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def eca_history(row0: np.ndarray, table: np.ndarray, steps: int, ring: bool) -> np.ndarray:
    """Space-time history of an elementary (radius-1, binary) rule.

    row0: uint8 initial row.  table: uint8[8], output per neighborhood index
    left*4 + center*2 + right.  Returns uint8[steps+1, width].  With
    ring=False the boundary reads zeros, so the caller must pad enough margin
    for the light cone.
    """
    row = np.asarray(row0, dtype=np.uint8)
    table = np.asarray(table, dtype=np.uint8)
    out = np.empty((steps + 1, row.shape[0]), dtype=np.uint8)
    out[0] = row
    for t in range(steps):
        row = out[t]
        if ring:
            left = np.roll(row, 1)
            right = np.roll(row, -1)
        else:
            left = np.concatenate(([0], row[:-1])).astype(np.uint8)
            right = np.concatenate((row[1:], [0])).astype(np.uint8)
        out[t + 1] = table[(left << 2) | (row << 1) | right]
    return out


def apply_gate_statevector(
    state: np.ndarray, gate: np.ndarray, targets: tuple[int, ...], n: int
) -> np.ndarray:
    """Apply a k-qubit gate to a dense 2**n state vector.

    Qubit 0 is the most significant bit of the vector index, matching the
    bitstring-label convention of the sparse register.  targets[0] is the
    most significant bit of the gate's own 2**k basis index.
    """
    k = len(targets)
    if gate.shape != (1 << k, 1 << k):
        raise ValueError("gate dimension does not match target count")
    psi = np.asarray(state, dtype=np.complex128).reshape([2] * n)
    rest = [q for q in range(n) if q not in targets]
    perm = list(targets) + rest
    psi = np.transpose(psi, perm).reshape(1 << k, -1)
    psi = gate @ psi
    psi = psi.reshape([2] * n)
    inv = np.argsort(perm)
    return np.transpose(psi, inv).reshape(-1)
