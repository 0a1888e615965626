"""Numpy implementations of the kernel entry points.

Used when the compiled ``_kernels`` module is unavailable; semantics are
identical.
"""
from __future__ import annotations

import numpy as np

from ._program import KIND_H, KIND_X

_SQRT_HALF = 0.7071067811865475244


def lanes_apply(kind, cptr, ctrl, tgt, state):
    for g in range(len(kind)):
        cs = ctrl[cptr[g]:cptr[g + 1]]
        t = tgt[g]
        if len(cs) == 0:
            np.invert(state[t], out=state[t])
        elif len(cs) == 1:
            state[t] ^= state[cs[0]]
        else:
            state[t] ^= np.bitwise_and.reduce(state[cs], axis=0)


def _pair_views(psi, nq, t, controls):
    # axis q-1-i of the reshaped tensor is qubit i
    tensor = psi.reshape((2,) * nq)
    idx = [slice(None)] * nq
    # length-1 slices keep every result a view, even when all axes are fixed
    for c in controls:
        idx[nq - 1 - c] = slice(1, 2)
    idx[nq - 1 - t] = slice(0, 1)
    lo = tensor[tuple(idx)]
    idx[nq - 1 - t] = slice(1, 2)
    hi = tensor[tuple(idx)]
    return lo, hi


def sv_apply(kind, cptr, ctrl, tgt, psi):
    nq = int(psi.shape[0]).bit_length() - 1
    for g in range(len(kind)):
        cs = ctrl[cptr[g]:cptr[g + 1]]
        lo, hi = _pair_views(psi, nq, int(tgt[g]), [int(c) for c in cs])
        if kind[g] == KIND_X:
            tmp = lo.copy()
            lo[...] = hi
            hi[...] = tmp
        elif kind[g] == KIND_H:
            a = lo.copy()
            lo += hi
            lo *= _SQRT_HALF
            a -= hi
            a *= _SQRT_HALF
            hi[...] = a
        else:
            np.negative(hi, out=hi)
