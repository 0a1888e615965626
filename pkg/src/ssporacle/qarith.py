"""Varying-width reversible addition and register width planning."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .circuit import CCX, CX, Circuit, Register
from .errors import EmptyInstance, InvalidValue, OverlappingOperands, WidthOverflow

FIXED_WIDTH = 32


class CarryMode(str, Enum):
    FRESH = "fresh"
    SHARED = "shared"


class WidthMode(str, Enum):
    FIXED32 = "fixed32"
    VAR_ELEM = "var-elem"
    VAR_ALL = "var-all"


def num_bits(v: int) -> int:
    """Smallest register width that holds ``v`` (``num_bits(0) == 1``)."""
    if v < 0:
        raise InvalidValue(f"num_bits needs a non-negative integer, got {v}")
    return max(1, int(v).bit_length())


@dataclass(frozen=True)
class WidthPlan:
    element_widths: tuple[int, ...]
    sum_widths: tuple[int, ...]
    total_width: int

    @property
    def qubits(self) -> int:
        """Value, shadow and sum qubits implied by the plan (carries excluded)."""
        return 2 * sum(self.element_widths) + sum(self.sum_widths)


def plan_widths(values: Sequence[int], mode: WidthMode | str) -> WidthPlan:
    mode = WidthMode(mode)
    if len(values) == 0:
        raise EmptyInstance("no values to plan")
    if any(v < 1 for v in values):
        raise InvalidValue(f"values must be positive integers: {list(values)}")
    total = sum(values)
    n = len(values)
    if mode is WidthMode.FIXED32:
        if num_bits(total) > FIXED_WIDTH:
            raise WidthOverflow(f"sum {total} does not fit in {FIXED_WIDTH} bits")
        return WidthPlan((FIXED_WIDTH,) * n, (FIXED_WIDTH,) * (n - 1), FIXED_WIDTH)
    elems = tuple(num_bits(v) for v in values)
    if mode is WidthMode.VAR_ELEM:
        w = num_bits(total)
        return WidthPlan(elems, (w,) * (n - 1), w)
    sums = []
    running = values[0]
    for v in values[1:]:
        running += v
        sums.append(num_bits(running))
    return WidthPlan(elems, tuple(sums), num_bits(total))


def emit_full_adder(circuit: Circuit, v: int, w: int, cin: int, sum_out: int, cout: int) -> None:
    """sum = v^w^cin with three CX; carry = vw ^ v.cin ^ w.cin with three CCX."""
    if len({v, w, cin, sum_out, cout}) != 5:
        raise OverlappingOperands("full adder needs five distinct qubits")
    circuit.append(CX(v, sum_out))
    circuit.append(CX(w, sum_out))
    circuit.append(CX(cin, sum_out))
    circuit.append(CCX(v, w, cout))
    circuit.append(CCX(v, cin, cout))
    circuit.append(CCX(w, cin, cout))


def _carry_gates(ins: list[int], cin: int | None, cout: int) -> list:
    """Majority of the present inputs into ``cout``; absent terms are elided."""
    terms = list(ins) + ([cin] if cin is not None else [])
    gates = []
    for i in range(len(terms)):
        for j in range(i + 1, len(terms)):
            gates.append(CCX(terms[i], terms[j], cout))
    return gates


def emit_ripple_add(
    circuit: Circuit,
    a: Register,
    b: Register,
    out_width: int,
    carry_mode: CarryMode | str = CarryMode.FRESH,
    name: str = "s",
) -> Register:
    """Write ``a + b mod 2**out_width`` into a fresh register and return it.

    Operands may differ in width; bits beyond an operand's width are constant
    zero and the gates that would read them are not emitted.  Bit position 0
    still gets a ``|0>`` carry-in qubit, as every position does in fresh mode.
    The final carry-out is dropped, and when the top output position has no
    operand bits its value is produced directly as the previous carry-out.

    In shared mode a single carry qubit is threaded through all positions:
    the carry-out of position ``j`` is computed into the shared qubit, copied
    into output bit ``j+1`` (which then serves as carry-in for that
    position), and the shared qubit is cleared by replaying its CCX gates in
    reverse before ``v`` and ``w`` are folded into output bit ``j``.
    """
    carry_mode = CarryMode(carry_mode)
    if out_width < max(a.width, b.width):
        raise WidthOverflow(f"output width {out_width} narrower than operands ({a.width}, {b.width})")
    out = circuit.new_register(out_width, name, "sum")

    def inputs(j: int) -> list[int]:
        return [r.qubits[j] for r in (a, b) if j < r.width]

    top = out_width - 1
    # top position with no operand bits is a pure carry
    direct_top = not inputs(top) and out_width > 1

    if carry_mode is CarryMode.FRESH:
        ncarry = out_width - 1 if direct_top else out_width
        carries = circuit.new_register(ncarry, f"{name}_c", "carry").qubits
        for j in range(out_width):
            ins = inputs(j)
            if direct_top and j == top:
                break
            cin = carries[j]
            for q in ins:
                circuit.append(CX(q, out.qubits[j]))
            circuit.append(CX(cin, out.qubits[j]))
            if j == top:
                break
            cout = out.qubits[top] if (direct_top and j + 1 == top) else carries[j + 1]
            for g in _carry_gates(ins, cin, cout):
                circuit.append(g)
        return out

    shared = circuit.new_register(1, f"{name}_c", "carry").qubits[0]
    for j in range(out_width):
        ins = inputs(j)
        # carry-in for position j sits in out[j] (zero for j == 0)
        cin = out.qubits[j] if j > 0 else None
        gates = _carry_gates(ins, cin, shared) if j < top else []
        if gates:
            for g in gates:
                circuit.append(g)
            circuit.append(CX(shared, out.qubits[j + 1]))
            for g in reversed(gates):
                circuit.append(g)
        for q in ins:
            circuit.append(CX(q, out.qubits[j]))
    return out


__all__ = [
    "FIXED_WIDTH",
    "CarryMode",
    "WidthMode",
    "WidthPlan",
    "emit_full_adder",
    "emit_ripple_add",
    "num_bits",
    "plan_widths",
]
