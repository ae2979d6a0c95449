# cython: language_level=3
"""Compiled hot kernels: ECA row stepping and dense gate application.

Mirrors `_core_py`; the selector in `qcasim._kernels` prefers this module
when it has been built.
"""

import numpy as np

cimport cython
cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


@cython.boundscheck(False)
@cython.wraparound(False)
def eca_history(row0, table, int steps, bint ring):
    """Space-time history of an elementary (radius-1, binary) rule."""
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] row = np.ascontiguousarray(row0, dtype=np.uint8)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] tab = np.ascontiguousarray(table, dtype=np.uint8)
    cdef Py_ssize_t width = row.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] out = np.empty((steps + 1, width), dtype=np.uint8)
    cdef Py_ssize_t t, i
    cdef unsigned char left, center, right
    cdef cnp.uint8_t[:, :] o = out
    cdef cnp.uint8_t[:] tb = tab

    for i in range(width):
        o[0, i] = row[i]
    for t in range(steps):
        for i in range(width):
            center = o[t, i]
            if ring:
                left = o[t, (i - 1) % width]
                right = o[t, (i + 1) % width]
            else:
                left = o[t, i - 1] if i > 0 else 0
                right = o[t, i + 1] if i < width - 1 else 0
            o[t + 1, i] = tb[(left << 2) | (center << 1) | right]
    return out


@cython.boundscheck(False)
@cython.wraparound(False)
def apply_gate_statevector(state, gate, targets, int n):
    """Apply a k-qubit gate to a dense 2**n state vector.

    Qubit 0 is the most significant bit of the vector index; targets[0] is
    the most significant bit of the gate's own basis index.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] psi = np.ascontiguousarray(state, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] g = np.ascontiguousarray(gate, dtype=np.complex128)
    cdef int k = len(targets)
    cdef int dim = 1 << k
    if g.shape[0] != dim or g.shape[1] != dim:
        raise ValueError("gate dimension does not match target count")

    cdef cnp.ndarray[cnp.int64_t, ndim=1] bits = np.empty(k, dtype=np.int64)
    cdef int j
    for j in range(k):
        # shift that moves state-index bit `targets[j]` to position 0
        bits[j] = n - 1 - <int>targets[j]

    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty_like(psi)
    cdef Py_ssize_t size = psi.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] offsets = np.zeros(dim, dtype=np.int64)
    cdef int sub, b
    for sub in range(dim):
        for b in range(k):
            if (sub >> (k - 1 - b)) & 1:
                offsets[sub] |= (<long long>1) << bits[b]
    cdef long long target_mask = 0
    for b in range(k):
        target_mask |= (<long long>1) << bits[b]

    cdef Py_ssize_t base
    cdef int r, c
    cdef double complex acc
    cdef cnp.complex128_t[:] pv = psi
    cdef cnp.complex128_t[:] ov = out
    cdef cnp.complex128_t[:, :] gv = g
    cdef cnp.int64_t[:] off = offsets
    for base in range(size):
        if base & target_mask:
            continue
        for r in range(dim):
            acc = 0
            for c in range(dim):
                acc = acc + gv[r, c] * pv[base + off[c]]
            ov[base + off[r]] = acc
    return out
