# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for the basis-lane and statevector engines.

Gate programs arrive pre-flattened (see ``_program.py``): ``kind`` codes,
CSR-style control lists and one target per gate.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t, int8_t

cnp.import_array()

DEF KIND_X = 0
DEF KIND_H = 1
DEF KIND_Z = 2


def lanes_apply(const int8_t[::1] kind, const int64_t[::1] cptr, const int64_t[::1] ctrl,
                const int64_t[::1] tgt, uint64_t[:, ::1] state):
    """Apply controlled-X family gates to a bit-sliced state in place.

    Row ``q`` of ``state`` holds qubit ``q`` for 64 inputs per word.
    """
    cdef Py_ssize_t g, w, c, nwords = state.shape[1]
    cdef uint64_t m
    cdef int64_t t
    with nogil:
        for g in range(kind.shape[0]):
            t = tgt[g]
            for w in range(nwords):
                m = <uint64_t>0xFFFFFFFFFFFFFFFF
                for c in range(cptr[g], cptr[g + 1]):
                    m &= state[ctrl[c], w]
                state[t, w] ^= m


def sv_apply(const int8_t[::1] kind, const int64_t[::1] cptr, const int64_t[::1] ctrl,
             const int64_t[::1] tgt, double complex[::1] psi):
    """Apply a gate program to a statevector in place (qubit 0 = LSB)."""
    cdef Py_ssize_t g, c, j, half = psi.shape[0] >> 1
    cdef uint64_t cmask, tbit, low, i0, i1
    cdef double complex a, b
    cdef double r = 0.7071067811865475244
    with nogil:
        for g in range(kind.shape[0]):
            tbit = (<uint64_t>1) << tgt[g]
            low = tbit - 1
            cmask = 0
            for c in range(cptr[g], cptr[g + 1]):
                cmask |= (<uint64_t>1) << ctrl[c]
            if kind[g] == KIND_X:
                for j in range(half):
                    i0 = ((<uint64_t>j & ~low) << 1) | (<uint64_t>j & low)
                    if (i0 & cmask) == cmask:
                        i1 = i0 | tbit
                        a = psi[i0]
                        psi[i0] = psi[i1]
                        psi[i1] = a
            elif kind[g] == KIND_H:
                for j in range(half):
                    i0 = ((<uint64_t>j & ~low) << 1) | (<uint64_t>j & low)
                    i1 = i0 | tbit
                    a = psi[i0]
                    b = psi[i1]
                    psi[i0] = (a + b) * r
                    psi[i1] = (a - b) * r
            else:
                for j in range(half):
                    i1 = ((<uint64_t>j & ~low) << 1) | (<uint64_t>j & low) | tbit
                    psi[i1] = -psi[i1]
