"""Gate-level circuit IR with register bookkeeping and a plain-text format.

Qubits live in a flat arena indexed from 0.  Registers name ordered slices of
that arena, least-significant bit first.  Classical preparation of constant
registers is kept out of the gate list (``initial_ones``) but is still
charged as one X gate per qubit in :func:`resource_report`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .errors import (
    BadQubit,
    InvalidGate,
    InvalidWidth,
    NotReversible,
    OverlappingOperands,
    ParseError,
)


class GateKind(str, Enum):
    X = "x"
    H = "h"
    Z = "z"
    CX = "cx"
    CCX = "ccx"
    MCX = "mcx"
    BARRIER = "barrier"
    MEASURE = "measure"


COUNTED_KINDS = (GateKind.X, GateKind.H, GateKind.Z, GateKind.CX, GateKind.CCX, GateKind.MCX)
SELF_INVERSE_KINDS = frozenset(COUNTED_KINDS)

ROLES = (
    "input-x",
    "ancilla-y",
    "value",
    "shadow",
    "sum",
    "carry",
    "compare",
    "result",
    "scratch",
)

_ARITY = {
    GateKind.X: 0,
    GateKind.H: 0,
    GateKind.Z: 0,
    GateKind.CX: 1,
    GateKind.CCX: 2,
    GateKind.MEASURE: 0,
    GateKind.BARRIER: 0,
}


@dataclass(frozen=True, slots=True)
class Gate:
    kind: GateKind
    controls: tuple[int, ...] = ()
    targets: tuple[int, ...] = ()

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + self.targets


def X(t: int) -> Gate:
    return Gate(GateKind.X, (), (t,))


def H(t: int) -> Gate:
    return Gate(GateKind.H, (), (t,))


def Z(t: int) -> Gate:
    return Gate(GateKind.Z, (), (t,))


def CX(c: int, t: int) -> Gate:
    return Gate(GateKind.CX, (c,), (t,))


def CCX(c1: int, c2: int, t: int) -> Gate:
    return Gate(GateKind.CCX, (c1, c2), (t,))


def MCX(controls: Sequence[int], t: int) -> Gate:
    return Gate(GateKind.MCX, tuple(controls), (t,))


def Barrier(qubits: Sequence[int]) -> Gate:
    return Gate(GateKind.BARRIER, (), tuple(qubits))


def Measure(t: int) -> Gate:
    return Gate(GateKind.MEASURE, (), (t,))


def canonical(gate: Gate) -> Gate:
    """Validate operand shape and rewrite small MCX gates to CX/CCX."""
    kind = gate.kind
    if kind is GateKind.MCX:
        if len(gate.controls) == 0:
            raise InvalidGate("MCX needs at least one control")
        if len(gate.controls) == 1:
            gate = Gate(GateKind.CX, gate.controls, gate.targets)
        elif len(gate.controls) == 2:
            gate = Gate(GateKind.CCX, gate.controls, gate.targets)
    elif len(gate.controls) != _ARITY[kind]:
        raise InvalidGate(f"{kind.value} takes {_ARITY[kind]} controls, got {len(gate.controls)}")
    if kind is GateKind.BARRIER:
        if not gate.targets:
            raise InvalidGate("barrier spans at least one qubit")
    elif len(gate.targets) != 1:
        raise InvalidGate(f"{kind.value} takes exactly one target")
    return gate


@dataclass(frozen=True)
class Register:
    name: str
    qubits: tuple[int, ...]
    role: str = "scratch"

    @property
    def width(self) -> int:
        return len(self.qubits)

    def __len__(self) -> int:
        return len(self.qubits)

    def __getitem__(self, i):
        return self.qubits[i]

    def __iter__(self):
        return iter(self.qubits)


@dataclass(frozen=True)
class ResourceReport:
    qubits: int
    gate_counts: dict
    total_gates: int
    max_control_arity: int


@dataclass
class Circuit:
    qubit_count: int = 0
    registers: list[Register] = field(default_factory=list)
    gates: list[Gate] = field(default_factory=list)
    initial_ones: set[int] = field(default_factory=set)

    # -- allocation ---------------------------------------------------------
    def new_register(self, width: int, name: str, role: str = "scratch") -> Register:
        if width < 1:
            raise InvalidWidth(f"register {name!r} needs width >= 1, got {width}")
        if role not in ROLES:
            raise ValueError(f"unknown register role {role!r}")
        # the text format is whitespace-delimited
        if not name or any(ch.isspace() for ch in name):
            raise ValueError(f"register name {name!r} must be non-empty without whitespace")
        start = self.qubit_count
        reg = Register(name, tuple(range(start, start + width)), role)
        self.qubit_count += width
        self.registers.append(reg)
        return reg

    def register(self, name: str) -> Register:
        for reg in self.registers:
            if reg.name == name:
                return reg
        raise KeyError(name)

    def set_initial(self, qubit: int) -> None:
        self._check_qubit(qubit)
        self.initial_ones.add(qubit)

    # -- gate emission ------------------------------------------------------
    def _check_qubit(self, q: int) -> None:
        if not (0 <= q < self.qubit_count):
            raise BadQubit(f"qubit {q} outside arena of {self.qubit_count}")

    def append(self, gate: Gate) -> None:
        gate = canonical(gate)
        for q in gate.qubits:
            self._check_qubit(q)
        if gate.controls:
            ctrl = set(gate.controls)
            if len(ctrl) != len(gate.controls) or ctrl.intersection(gate.targets):
                raise OverlappingOperands(f"repeated operand in {gate}")
        if gate.kind is GateKind.BARRIER and len(set(gate.targets)) != len(gate.targets):
            raise OverlappingOperands(f"repeated operand in {gate}")
        self.gates.append(gate)

    append_gate = append

    def extend(self, gates: Iterable[Gate]) -> None:
        for g in gates:
            self.append(g)

    def x(self, t: int) -> None:
        self.append(X(t))

    def h(self, t: int) -> None:
        self.append(H(t))

    def z(self, t: int) -> None:
        self.append(Z(t))

    def cx(self, c: int, t: int) -> None:
        self.append(CX(c, t))

    def ccx(self, c1: int, c2: int, t: int) -> None:
        self.append(CCX(c1, c2, t))

    def mcx(self, controls: Sequence[int], t: int) -> None:
        self.append(MCX(controls, t))

    def barrier(self, qubits: Sequence[int] | None = None) -> None:
        self.append(Barrier(range(self.qubit_count) if qubits is None else qubits))

    def measure(self, t: int) -> None:
        self.append(Measure(t))

    def copy(self) -> "Circuit":
        return Circuit(self.qubit_count, list(self.registers), list(self.gates), set(self.initial_ones))

    def resource_report(self) -> ResourceReport:
        return resource_report(self)


def new_register(circuit: Circuit, width: int, name: str, role: str = "scratch") -> Register:
    return circuit.new_register(width, name, role)


def append_gate(circuit: Circuit, gate: Gate) -> None:
    circuit.append(gate)


def resource_report(circuit: Circuit) -> ResourceReport:
    counts = {k.value.upper(): 0 for k in COUNTED_KINDS}
    arity = 0
    for g in circuit.gates:
        if g.kind is GateKind.BARRIER or g.kind is GateKind.MEASURE:
            continue
        counts[g.kind.value.upper()] += 1
        if len(g.controls) > arity:
            arity = len(g.controls)
    counts["X"] += len(circuit.initial_ones)
    return ResourceReport(
        qubits=circuit.qubit_count,
        gate_counts=counts,
        total_gates=sum(counts.values()),
        max_control_arity=arity,
    )


def reverse_fragment(gates: Sequence[Gate]) -> list[Gate]:
    """Inverse of a fragment built from self-inverse gates: the reversed list."""
    for g in gates:
        if g.kind not in SELF_INVERSE_KINDS:
            raise NotReversible(f"{g.kind.value} gate cannot be replayed as its own inverse")
    return list(reversed(gates))


# -- text format ----------------------------------------------------------------

def _ids(ids: Iterable[int]) -> str:
    return ",".join(str(i) for i in ids)


def export_text(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.qubit_count}"]
    for reg in circuit.registers:
        lines.append(f"reg {reg.name} role:{reg.role} [{_ids(reg.qubits)}]")
    for q in sorted(circuit.initial_ones):
        lines.append(f"init1 {q}")
    for g in circuit.gates:
        k = g.kind
        if k is GateKind.MCX:
            lines.append(f"mcx {_ids(g.controls)} {g.targets[0]}")
        elif k is GateKind.BARRIER:
            lines.append(f"barrier {_ids(g.targets)}")
        else:
            lines.append(" ".join([k.value, *map(str, g.controls), str(g.targets[0])]))
    return "\n".join(lines) + "\n"


def _parse_int(tok: str, lineno: int) -> int:
    if not tok.isdigit():
        raise ParseError(f"line {lineno}: expected a decimal id, got {tok!r}")
    return int(tok)


def _parse_list(tok: str, lineno: int) -> list[int]:
    return [_parse_int(t, lineno) for t in tok.split(",")]


def parse_text(text: str) -> Circuit:
    """Inverse of :func:`export_text`."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith("qubits "):
        raise ParseError("line 1: expected 'qubits <N>'")
    circuit = Circuit()
    total = _parse_int(lines[0].split()[1], 1)
    circuit.qubit_count = total
    simple = {"x": X, "h": H, "z": Z, "measure": Measure}
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if not parts:
            continue
        head, args = parts[0], parts[1:]
        try:
            if head == "reg":
                name, role, ids = args
                if not role.startswith("role:") or not (ids.startswith("[") and ids.endswith("]")):
                    raise ParseError(f"line {lineno}: malformed register line")
                qubits = tuple(_parse_list(ids[1:-1], lineno))
                circuit.registers.append(Register(name, qubits, role[len("role:"):]))
            elif head == "init1":
                (q,) = args
                circuit.set_initial(_parse_int(q, lineno))
            elif head in simple:
                (t,) = args
                circuit.append(simple[head](_parse_int(t, lineno)))
            elif head == "cx":
                c, t = args
                circuit.append(CX(_parse_int(c, lineno), _parse_int(t, lineno)))
            elif head == "ccx":
                c1, c2, t = args
                circuit.append(CCX(_parse_int(c1, lineno), _parse_int(c2, lineno), _parse_int(t, lineno)))
            elif head == "mcx":
                cs, t = args
                circuit.append(MCX(_parse_list(cs, lineno), _parse_int(t, lineno)))
            elif head == "barrier":
                (qs,) = args
                circuit.append(Barrier(_parse_list(qs, lineno)))
            else:
                raise ParseError(f"line {lineno}: unknown statement {head!r}")
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return circuit
