"""Execution engines.

Two engines share one flattened gate program:

* a bit-sliced basis engine for classical-reversible circuits, where each
  ``uint64`` word carries 64 independent basis inputs ("lanes"), so an
  exhaustive sweep over ``2**n`` selections costs ``2**n / 64`` word ops per
  gate;
* a dense statevector engine for small end-to-end runs.

The compiled kernel module is used when it imports; otherwise the numpy
fallback is selected.  Set ``SSPORACLE_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..circuit import Circuit, GateKind, Register
from ..errors import NotClassical, QubitBudgetExceeded, UseMeasureOp, WidthMismatch
from . import _pyfallback
from ._program import Program, flatten

if os.environ.get("SSPORACLE_PURE_PYTHON"):
    _kernels = _pyfallback
    BACKEND = "python"
else:
    try:
        from . import _kernels  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _kernels = _pyfallback
        BACKEND = "python"

NORM_TOL = 1e-9
PROB_TOL = 1e-6
DEFAULT_QUBIT_BUDGET = 26

_CLASSICAL = frozenset({GateKind.X, GateKind.CX, GateKind.CCX, GateKind.MCX, GateKind.BARRIER})


def backend_module(name: str | None = None):
    """Kernel module by name ("cython" or "python"); default is the active one."""
    if name is None:
        return _kernels
    if name == "python":
        return _pyfallback
    if name == "cython":
        from . import _kernels as compiled  # type: ignore[attr-defined]

        return compiled
    raise ValueError(f"unknown backend {name!r}")


# -- basis engine ------------------------------------------------------------------

@dataclass(frozen=True)
class BasisState:
    """Computational basis state; bit ``i`` of ``value`` is qubit ``i``."""

    value: int
    width: int

    def __post_init__(self):
        if self.value < 0 or self.value >> self.width:
            raise ValueError(f"value {self.value} does not fit in {self.width} qubits")

    @classmethod
    def from_bits(cls, bits: dict[int, int] | Sequence[int], width: int | None = None) -> "BasisState":
        if isinstance(bits, dict):
            if width is None:
                raise ValueError("width is required when bits is a mapping")
            value = sum(1 << q for q, b in bits.items() if b)
            return cls(value, width)
        value = sum(1 << q for q, b in enumerate(bits) if b)
        return cls(value, len(bits) if width is None else width)

    def bit(self, q: int) -> int:
        return (self.value >> q) & 1

    def read(self, qubits: Sequence[int]) -> int:
        """Integer held by ``qubits`` (first entry least significant)."""
        return sum(self.bit(q) << i for i, q in enumerate(qubits))

    def with_register(self, qubits: Sequence[int], value: int) -> "BasisState":
        v = self.value
        for i, q in enumerate(qubits):
            v = (v & ~(1 << q)) | (((value >> i) & 1) << q)
        return BasisState(v, self.width)


def _check_classical(circuit: Circuit) -> None:
    for g in circuit.gates:
        if g.kind not in _CLASSICAL:
            raise NotClassical(f"{g.kind.value} gate has no basis-state semantics")


def classical_program(circuit: Circuit) -> Program:
    """Flattened program with ``initial_ones`` preparation prepended."""
    _check_classical(circuit)
    return flatten(circuit.gates, prefix_x=sorted(circuit.initial_ones))


def lane_words(lanes: int) -> int:
    return max(1, -(-lanes // 64))


def exhaustive_lanes(qubit_count: int, qubits: Sequence[int]) -> np.ndarray:
    """Bit-sliced state whose lane ``L`` sets ``qubits[i]`` to bit ``i`` of ``L``.

    All other qubits are 0.  There are ``2**len(qubits)`` meaningful lanes;
    padding lanes in the last word repeat lane patterns and should be ignored.
    """
    nlanes = 1 << len(qubits)
    words = lane_words(nlanes)
    state = np.zeros((qubit_count, words), dtype=np.uint64)
    lane = np.arange(words * 64, dtype=np.uint64) % np.uint64(nlanes)
    weights = np.uint64(1) << np.arange(64, dtype=np.uint64)
    for i, q in enumerate(qubits):
        bits = ((lane >> np.uint64(i)) & np.uint64(1)).reshape(words, 64)
        state[q] = (bits * weights).sum(axis=1, dtype=np.uint64)
    return state


def read_lanes(state: np.ndarray, qubits: Sequence[int], lanes: int) -> np.ndarray:
    """Per-lane integer values of ``qubits`` for the first ``lanes`` lanes."""
    out = np.zeros(lanes, dtype=np.int64)
    for i, q in enumerate(qubits):
        bits = np.unpackbits(state[q].view(np.uint8), bitorder="little")[:lanes]
        out |= bits.astype(np.int64) << i
    return out


def run_program_lanes(program: Program, state: np.ndarray, backend: str | None = None) -> np.ndarray:
    """Run a flattened classical program on a bit-sliced state in place."""
    if not state.flags.c_contiguous or state.dtype != np.uint64:
        raise TypeError("lane state must be a C-contiguous uint64 array")
    backend_module(backend).lanes_apply(program.kind, program.cptr, program.ctrl, program.tgt, state)
    return state


def run_lanes(circuit: Circuit, state: np.ndarray, backend: str | None = None) -> np.ndarray:
    """Apply ``circuit`` (including ``initial_ones``) to every lane of ``state``."""
    if state.shape[0] != circuit.qubit_count:
        raise WidthMismatch(f"lane state has {state.shape[0]} rows, circuit has {circuit.qubit_count} qubits")
    return run_program_lanes(classical_program(circuit), state, backend)


def run_basis(circuit: Circuit, input: BasisState, backend: str | None = None) -> BasisState:
    if input.width != circuit.qubit_count:
        raise WidthMismatch(f"input has width {input.width}, circuit has {circuit.qubit_count} qubits")
    state = np.zeros((circuit.qubit_count, 1), dtype=np.uint64)
    for q in range(circuit.qubit_count):
        if input.bit(q):
            state[q, 0] = 1
    run_lanes(circuit, state, backend)
    value = 0
    for q in range(circuit.qubit_count):
        if int(state[q, 0]) & 1:
            value |= 1 << q
    return BasisState(value, circuit.qubit_count)


# -- statevector engine ------------------------------------------------------------

@dataclass
class StateVector:
    amplitudes: np.ndarray

    @property
    def num_qubits(self) -> int:
        return int(self.amplitudes.shape[0]).bit_length() - 1

    @classmethod
    def zero(cls, num_qubits: int) -> "StateVector":
        return cls.basis(num_qubits, 0)

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> "StateVector":
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps)

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def simulate(
    circuit: Circuit,
    initial: StateVector | None = None,
    budget: int = DEFAULT_QUBIT_BUDGET,
    backend: str | None = None,
) -> StateVector:
    """Apply ``circuit`` to ``initial`` (default ``|0...0>``); returns a new state."""
    q = circuit.qubit_count
    if q > budget:
        raise QubitBudgetExceeded(f"{q} qubits exceeds the statevector budget of {budget}")
    for g in circuit.gates:
        if g.kind is GateKind.MEASURE:
            raise UseMeasureOp("measurement is done with measure_register, not inside simulate")
    if initial is None:
        amps = np.zeros(1 << q, dtype=np.complex128)
        amps[0] = 1.0
    else:
        if initial.amplitudes.shape[0] != 1 << q:
            raise WidthMismatch(f"state has {initial.num_qubits} qubits, circuit has {q}")
        amps = np.array(initial.amplitudes, dtype=np.complex128, copy=True)
    if q == 0:
        return StateVector(amps)
    prog = flatten(circuit.gates, prefix_x=sorted(circuit.initial_ones))
    backend_module(backend).sv_apply(prog.kind, prog.cptr, prog.ctrl, prog.tgt, amps)
    return StateVector(amps)


def measure_register(state: StateVector, register: Register | Sequence[int]) -> dict[int, float]:
    """Exact marginal distribution over ``register``; keys are bit patterns."""
    qubits = list(register.qubits if isinstance(register, Register) else register)
    nq = state.num_qubits
    for qb in qubits:
        if not 0 <= qb < nq:
            raise ValueError(f"qubit {qb} outside a {nq}-qubit state")
    probs = state.probabilities().reshape((2,) * nq) if nq else state.probabilities()
    keep = [nq - 1 - qb for qb in qubits]
    drop = tuple(ax for ax in range(nq) if ax not in keep)
    marg = probs.sum(axis=drop) if drop else probs
    # remaining axes are in ascending axis order; reorder to (msb ... lsb) of the register
    remaining = sorted(keep)
    order = [remaining.index(ax) for ax in reversed(keep)]
    marg = np.transpose(marg, order).reshape(-1)
    return {pattern: float(p) for pattern, p in enumerate(marg)}


def sample_shots(distribution: dict[int, float], shots: int, seed: int | None = None) -> dict[int, int]:
    """Multinomial shot counts drawn from an exact distribution."""
    rng = np.random.default_rng(seed)
    keys = sorted(distribution)
    p = np.array([distribution[k] for k in keys], dtype=float)
    p = np.clip(p, 0.0, None)
    p /= p.sum()
    counts = rng.multinomial(shots, p)
    return {k: int(c) for k, c in zip(keys, counts) if c}


def analytic_grover_probability(n: int, m_solutions: int, iterations: int) -> float:
    theta = math.asin(math.sqrt(m_solutions / 2**n))
    return math.sin((2 * iterations + 1) * theta) ** 2


__all__ = [
    "BACKEND",
    "BasisState",
    "StateVector",
    "analytic_grover_probability",
    "exhaustive_lanes",
    "measure_register",
    "read_lanes",
    "run_basis",
    "run_lanes",
    "run_program_lanes",
    "sample_shots",
    "simulate",
]
