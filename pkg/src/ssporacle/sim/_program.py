"""Flatten a gate list into the array form consumed by the kernels."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..circuit import GateKind

KIND_X = 0
KIND_H = 1
KIND_Z = 2

_CODES = {
    GateKind.X: KIND_X,
    GateKind.CX: KIND_X,
    GateKind.CCX: KIND_X,
    GateKind.MCX: KIND_X,
    GateKind.H: KIND_H,
    GateKind.Z: KIND_Z,
}


@dataclass(frozen=True)
class Program:
    kind: np.ndarray  # int8, one per gate
    cptr: np.ndarray  # int64, len(kind) + 1 offsets into ctrl
    ctrl: np.ndarray  # int64
    tgt: np.ndarray  # int64

    def __len__(self) -> int:
        return len(self.kind)


def flatten(gates, prefix_x=()) -> Program:
    """Barriers are dropped; ``prefix_x`` qubits get a leading X each."""
    kinds: list[int] = []
    cptr = [0]
    ctrl: list[int] = []
    tgt: list[int] = []
    for q in prefix_x:
        kinds.append(KIND_X)
        cptr.append(len(ctrl))
        tgt.append(q)
    for g in gates:
        if g.kind is GateKind.BARRIER:
            continue
        kinds.append(_CODES[g.kind])
        ctrl.extend(g.controls)
        cptr.append(len(ctrl))
        tgt.append(g.targets[0])
    return Program(
        np.asarray(kinds, dtype=np.int8),
        np.asarray(cptr, dtype=np.int64),
        np.asarray(ctrl, dtype=np.int64),
        np.asarray(tgt, dtype=np.int64),
    )
