"""Equality tests between a quantum register and a classical target.

The comparison is split in two: an XOR stage producing a ``same`` register
that is all-zero iff the operands agree, then an all-zero test.  Two
all-zero back-ends are provided: a single multi-controlled X, and a log-star
cascade of population counts that never uses more than two controls.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .circuit import CCX, CX, MCX, X, Circuit, Register
from .errors import InvalidMask, TargetTooWide
from .qarith import num_bits


class EqualityBackend(str, Enum):
    MCX = "mcx"
    LOGSTAR = "logstar"


@dataclass(frozen=True)
class MatchInterval:
    low: int
    high: int
    k: int

    @property
    def diff(self) -> int:
        return self.high - self.low

    def __contains__(self, value: int) -> bool:
        return self.low <= value <= self.high


def match_interval(target: int, k: int) -> MatchInterval:
    if k < 0:
        raise InvalidMask(f"mask bits must be non-negative, got {k}")
    low = target - (target % (1 << k))
    return MatchInterval(low, low + (1 << k) - 1, k)


def emit_xor_compare(
    circuit: Circuit,
    z: Register,
    target: int,
    width: int,
    fold_constant: bool = False,
    low_bit: int = 0,
    name: str = "same",
) -> Register:
    """Build ``same`` with ``same[i] = z[low_bit+i] ^ target[low_bit+i]``.

    ``z`` is zero-extended to ``width``.  Bits below ``low_bit`` are neither
    compared nor copied.
    """
    if z.width > width:
        raise TargetTooWide(f"register {z.name} is wider than the comparison width {width}")
    if target < 0 or num_bits(target) > width:
        raise TargetTooWide(f"target {target} does not fit in {width} bits")
    positions = range(low_bit, width)
    same = circuit.new_register(len(positions), name, "compare")
    if fold_constant:
        for i, j in enumerate(positions):
            if j < z.width:
                circuit.append(CX(z.qubits[j], same.qubits[i]))
            if (target >> j) & 1:
                circuit.append(X(same.qubits[i]))
        return same
    treg = circuit.new_register(len(positions), f"{name}_t", "value")
    for i, j in enumerate(positions):
        if (target >> j) & 1:
            circuit.set_initial(treg.qubits[i])
    for i, j in enumerate(positions):
        if j < z.width:
            circuit.append(CX(z.qubits[j], same.qubits[i]))
        circuit.append(CX(treg.qubits[i], same.qubits[i]))
    return same


def _final_zero_check(circuit: Circuit, bits, result: int) -> None:
    for q in bits:
        circuit.append(X(q))
    circuit.append(MCX(bits, result))
    for q in bits:
        circuit.append(X(q))


def emit_mcx_all_zero(circuit: Circuit, same: Register, name: str = "result") -> int:
    result = circuit.new_register(1, name, "result").qubits[0]
    _final_zero_check(circuit, list(same.qubits), result)
    return result


def logstar_stages(m: int) -> list[int]:
    """Accumulator widths of successive population-count stages for ``m`` bits."""
    widths = []
    while m > 2:
        m = num_bits(m)
        widths.append(m)
    return widths


def _emit_increment(circuit: Circuit, bit: int, acc, carries, count_after: int) -> None:
    """``acc += bit`` where the accumulator holds at most ``count_after - 1``.

    Only the low ``num_bits(count_after)`` accumulator bits can change.
    Carry ``i`` (``bit & acc[0] & ... & acc[i-1]``) lives in ``carries[i-1]``;
    carries are computed upward, then each accumulator bit is flipped and its
    carry cleared from the top down while the lower bits still hold their
    old values.
    """
    w = num_bits(count_after)
    chain = [bit] + list(carries[: w - 1])
    for i in range(1, w):
        circuit.append(CCX(chain[i - 1], acc[i - 1], chain[i]))
    for i in range(w - 1, 0, -1):
        circuit.append(CX(chain[i], acc[i]))
        circuit.append(CCX(chain[i - 1], acc[i - 1], chain[i]))
    circuit.append(CX(bit, acc[0]))


def emit_logstar_all_zero(circuit: Circuit, same: Register, name: str = "result") -> int:
    """All-zero test using only CX and CCX.

    Each stage replaces the current bit list by its population count, held in
    ``num_bits(len)`` fresh qubits; the count is zero iff every bit is zero.
    Stages repeat until at most two bits remain, which a single CCX (or CX)
    then tests.  Stage accumulators are kept until the caller's uncompute;
    the increment carries are shared across stages and are clean between
    increments.
    """
    bits = list(same.qubits)
    widths = logstar_stages(len(bits))
    carries: tuple[int, ...] = ()
    if widths and widths[0] > 1:
        carries = circuit.new_register(widths[0] - 1, f"{name}_inc", "scratch").qubits
    for stage, w in enumerate(widths):
        acc = circuit.new_register(w, f"{name}_pop{stage}", "scratch").qubits
        for count, b in enumerate(bits, start=1):
            _emit_increment(circuit, b, acc, carries, count)
        bits = list(acc)
    result = circuit.new_register(1, name, "result").qubits[0]
    _final_zero_check(circuit, bits, result)
    return result


def emit_all_zero(circuit: Circuit, same: Register, backend: EqualityBackend | str, name: str = "result") -> int:
    backend = EqualityBackend(backend)
    if backend is EqualityBackend.MCX:
        return emit_mcx_all_zero(circuit, same, name)
    return emit_logstar_all_zero(circuit, same, name)


def emit_masked_compare(
    circuit: Circuit,
    z: Register,
    target: int,
    width: int,
    k: int = 0,
    backend: EqualityBackend | str = EqualityBackend.MCX,
    fold_constant: bool = False,
) -> int:
    """Result qubit is 1 iff ``z >> k == target >> k``."""
    if k < 0 or k >= width:
        raise InvalidMask(f"mask bits k={k} must satisfy 0 <= k < {width}")
    same = emit_xor_compare(circuit, z, target, width, fold_constant, low_bit=k)
    return emit_all_zero(circuit, same, backend)


__all__ = [
    "EqualityBackend",
    "MatchInterval",
    "emit_all_zero",
    "emit_logstar_all_zero",
    "emit_masked_compare",
    "emit_mcx_all_zero",
    "emit_xor_compare",
    "logstar_stages",
    "match_interval",
]
