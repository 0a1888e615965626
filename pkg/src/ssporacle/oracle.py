"""Compile Subset Sum instances into Grover oracles and check them classically."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .circuit import CCX, CX, Circuit, Register, reverse_fragment
from .compare import EqualityBackend, emit_masked_compare
from .errors import (
    EmptyInstance,
    InvalidMask,
    InvalidValue,
    ParseError,
    TargetExceedsMax,
    TooLargeForBruteForce,
    VerificationFailed,
)
from .qarith import CarryMode, WidthMode, emit_ripple_add, num_bits, plan_widths
from .sim import exhaustive_lanes, read_lanes, run_lanes

MAX_BRUTE_FORCE = 30
MAX_VERIFY = 20


@dataclass(frozen=True)
class SSPInstance:
    values: tuple[int, ...]
    target: int

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if not self.values:
            raise EmptyInstance("instance has no values")
        if any(v < 1 for v in self.values):
            raise InvalidValue(f"values must be positive: {self.values}")
        if self.target < 1:
            raise InvalidValue(f"target must be positive, got {self.target}")

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def total(self) -> int:
        return sum(self.values)

    def to_text(self) -> str:
        return f"values: {','.join(map(str, self.values))}\ntarget: {self.target}\n"

    @classmethod
    def from_text(cls, text: str) -> "SSPInstance":
        fields = {}
        for line in text.splitlines():
            if not line.strip():
                continue
            key, sep, rest = line.partition(":")
            if not sep or key.strip() not in ("values", "target"):
                raise ParseError(f"unrecognised instance line {line!r}")
            fields[key.strip()] = rest.strip()
        try:
            values = tuple(int(v) for v in fields["values"].split(","))
            target = int(fields["target"])
        except (KeyError, ValueError) as exc:
            raise ParseError(f"malformed instance file: {exc}") from None
        return cls(values, target)

    @classmethod
    def from_file(cls, path: str | Path) -> "SSPInstance":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class OracleConfig:
    width_mode: WidthMode = WidthMode.VAR_ALL
    sorted: bool = True
    equality: EqualityBackend = EqualityBackend.MCX
    k: int = 0
    carry_mode: CarryMode = CarryMode.FRESH
    fold_constant: bool = False

    def __post_init__(self):
        object.__setattr__(self, "width_mode", WidthMode(self.width_mode))
        object.__setattr__(self, "equality", EqualityBackend(self.equality))
        object.__setattr__(self, "carry_mode", CarryMode(self.carry_mode))
        if self.k < 0:
            raise InvalidMask(f"k must be non-negative, got {self.k}")


# the four configurations swept by the benchmark, baseline first
BENCHMARK_CONFIGS: dict[str, OracleConfig] = {
    "fixed32": OracleConfig(WidthMode.FIXED32, sorted=False),
    "var-elem": OracleConfig(WidthMode.VAR_ELEM, sorted=False),
    "var-all": OracleConfig(WidthMode.VAR_ALL, sorted=False),
    "var-all-sorted": OracleConfig(WidthMode.VAR_ALL, sorted=True),
}


@dataclass
class OracleCircuit:
    """Compiled oracle.

    ``gates[:compute_len]`` computes the predicate into ``result``,
    ``gates[compute_len]`` is the phase-flip CX into ``y`` and the rest is
    the mirrored uncompute.  ``order[p]`` is the original index of the value
    summed at position ``p``.
    """

    circuit: Circuit
    layout: dict[str, Register]
    compute_len: int
    result: int
    order: tuple[int, ...]
    config: OracleConfig = field(default_factory=OracleConfig)

    @property
    def x(self) -> Register:
        return self.layout["x"]

    @property
    def y(self) -> int:
        return self.layout["y"].qubits[0]


def summation_order(values: Sequence[int], sort: bool) -> tuple[int, ...]:
    idx = range(len(values))
    # sorted() is stable, so equal values keep their input order
    return tuple(sorted(idx, key=lambda i: values[i])) if sort else tuple(idx)


def compile_oracle(instance: SSPInstance, config: OracleConfig = OracleConfig()) -> OracleCircuit:
    values, target, k = instance.values, instance.target, config.k
    total = instance.total
    if k == 0 and target > total:
        raise TargetExceedsMax(f"target {target} exceeds the sum of all values ({total})")
    if k >= num_bits(total):
        raise InvalidMask(f"k={k} must be below num_bits({total}) = {num_bits(total)}")
    order = summation_order(values, config.sorted)
    ordered = [values[i] for i in order]
    plan = plan_widths(ordered, config.width_mode)

    c = Circuit()
    layout: dict[str, Register] = {}
    x = layout["x"] = c.new_register(instance.n, "x", "input-x")
    layout["y"] = c.new_register(1, "y", "ancilla-y")

    shadows = []
    for pos, i in enumerate(order):
        width = plan.element_widths[pos]
        a = layout[f"a_{i + 1}"] = c.new_register(width, f"a_{i + 1}", "value")
        for j in range(width):
            if (values[i] >> j) & 1:
                c.set_initial(a.qubits[j])
        b = layout[f"b_{i + 1}"] = c.new_register(width, f"b_{i + 1}", "shadow")
        for j in range(width):
            c.append(CCX(a.qubits[j], x.qubits[i], b.qubits[j]))
        shadows.append(b)

    z = shadows[0]
    for step, b in enumerate(shadows[1:]):
        name = f"sum_{step + 1}"
        z = layout[name] = emit_ripple_add(c, z, b, plan.sum_widths[step], config.carry_mode, name=name)

    width = z.width
    result = emit_masked_compare(c, z, target, width, k, config.equality, config.fold_constant)
    layout["same"] = c.register("same")
    layout["result"] = c.register("result")

    compute = list(c.gates)
    c.append(CX(result, layout["y"].qubits[0]))
    c.gates.extend(reverse_fragment(compute))
    return OracleCircuit(c, layout, len(compute), result, order, config)


def compute_only(oracle: OracleCircuit) -> Circuit:
    """The compute half of the oracle as a standalone classical circuit."""
    c = oracle.circuit
    return Circuit(c.qubit_count, list(c.registers), list(c.gates[: oracle.compute_len]), set(c.initial_ones))


# -- classical reference -----------------------------------------------------------

def matches(total: int, target: int, k: int = 0) -> bool:
    return (total >> k) == (target >> k)


def subset_sums(values: Sequence[int]) -> np.ndarray:
    """``sums[mask]`` = sum of ``values[i]`` over set bits ``i`` of ``mask``."""
    sums = np.zeros(1, dtype=np.int64)
    for v in values:
        sums = np.concatenate([sums, sums + v])
    return sums


def classical_solutions(instance: SSPInstance, k: int = 0) -> frozenset[int]:
    """Masks (bit ``i`` selects ``values[i]``) whose sums match ``target`` on all but ``k`` low bits."""
    n = instance.n
    if n > MAX_BRUTE_FORCE:
        raise TooLargeForBruteForce(f"{n} values means 2**{n} subsets")
    split = min(n, 20)
    low = subset_sums(instance.values[:split])
    want = instance.target >> k
    found: list[int] = []
    high_sums = subset_sums(instance.values[split:])
    for hi, offset in enumerate(high_sums):
        hits = np.nonzero(((low + offset) >> k) == want)[0]
        found.extend(int(m) | (hi << split) for m in hits)
    return frozenset(found)


# -- verification ------------------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    inputs: int
    agreeing: int
    solutions: frozenset[int]
    restored: bool

    @property
    def passed(self) -> bool:
        return self.agreeing == self.inputs and self.restored

    def summary(self) -> str:
        status = "restored" if self.restored else "NOT restored"
        return (
            f"{self.agreeing}/{self.inputs} inputs agree; "
            f"{len(self.solutions)} solution(s); ancillas {status}"
        )


def marked_inputs(oracle: OracleCircuit, backend: str | None = None) -> np.ndarray:
    """Result bit of the compute fragment for every selection ``x`` (index = mask)."""
    circ = compute_only(oracle)
    lanes = 1 << oracle.x.width
    state = exhaustive_lanes(circ.qubit_count, oracle.x.qubits)
    run_lanes(circ, state, backend)
    return read_lanes(state, [oracle.result], lanes).astype(bool)


def check_restoration(oracle: OracleCircuit, solutions: frozenset[int], backend: str | None = None) -> int | None:
    """Run the full oracle on all ``x`` with ``y = 0``; return a failing mask or None.

    Every qubit other than ``y`` must come back to its prepared value and
    ``y`` must be flipped exactly on solutions.
    """
    circ = oracle.circuit
    n = oracle.x.width
    lanes = 1 << n
    start = exhaustive_lanes(circ.qubit_count, oracle.x.qubits)
    expected = start.copy()
    for q in circ.initial_ones:
        expected[q] = ~expected[q]
    final = run_lanes(circ, start.copy(), backend)
    y = oracle.y
    want_y = np.zeros(lanes, dtype=bool)
    want_y[list(solutions)] = True
    got_y = read_lanes(final, [y], lanes).astype(bool)
    bad = np.nonzero(got_y != want_y)[0]
    if len(bad):
        return int(bad[0])
    diff = final ^ expected
    diff[y] = 0
    rows = np.nonzero(diff.any(axis=1))[0]
    for q in rows:
        flipped = np.nonzero(read_lanes(diff, [int(q)], lanes))[0]
        if len(flipped):
            return int(flipped[0])
    return None


def verify_compiled(instance: SSPInstance, oracle: OracleCircuit, backend: str | None = None) -> VerificationReport:
    n = instance.n
    if n > MAX_VERIFY:
        raise TooLargeForBruteForce(f"exhaustive verification is limited to {MAX_VERIFY} values")
    solutions = classical_solutions(instance, oracle.config.k)
    expected = np.zeros(1 << n, dtype=bool)
    expected[list(solutions)] = True
    got = marked_inputs(oracle, backend)
    wrong = np.nonzero(got != expected)[0]
    if len(wrong):
        mask = int(wrong[0])
        raise VerificationFailed(
            f"oracle marks x={mask:0{n}b} as {bool(got[mask])}, brute force says {bool(expected[mask])}",
            mask,
        )
    bad = check_restoration(oracle, solutions, backend)
    if bad is not None:
        raise VerificationFailed(f"full oracle fails to restore ancillas for x={bad:0{n}b}", bad)
    return VerificationReport(1 << n, 1 << n, solutions, True)


def verify_oracle(instance: SSPInstance, config: OracleConfig = OracleConfig(), backend: str | None = None) -> VerificationReport:
    return verify_compiled(instance, compile_oracle(instance, config), backend)


__all__ = [
    "BENCHMARK_CONFIGS",
    "OracleCircuit",
    "OracleConfig",
    "SSPInstance",
    "VerificationReport",
    "check_restoration",
    "classical_solutions",
    "compile_oracle",
    "compute_only",
    "marked_inputs",
    "matches",
    "summation_order",
    "verify_compiled",
    "verify_oracle",
]
