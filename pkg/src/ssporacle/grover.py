"""Grover search over subset selections using a compiled oracle."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import H, MCX, X, Z, Circuit, Register
from .errors import NoSolutions
from .oracle import OracleCircuit, OracleConfig, SSPInstance, classical_solutions, compile_oracle
from .sim import DEFAULT_QUBIT_BUDGET, NORM_TOL, measure_register, sample_shots, simulate


def iteration_count(n: int, m_solutions: int) -> int:
    if m_solutions < 1:
        raise NoSolutions("no marked inputs; the iteration schedule is undefined")
    if m_solutions > 2**n:
        raise ValueError(f"{m_solutions} solutions among {2**n} inputs")
    return max(1, math.floor(math.pi / 4 * math.sqrt(2**n / m_solutions)))


def emit_diffuser(circuit: Circuit, x: Register) -> None:
    """Inversion about the mean on ``x``."""
    qs = list(x.qubits)
    for q in qs:
        circuit.append(H(q))
    for q in qs:
        circuit.append(X(q))
    if len(qs) == 1:
        circuit.append(Z(qs[0]))
    else:
        top = qs[-1]
        circuit.append(H(top))
        circuit.append(MCX(qs[:-1], top))
        circuit.append(H(top))
    for q in qs:
        circuit.append(X(q))
    for q in qs:
        circuit.append(H(q))


def grover_circuit(oracle: OracleCircuit, iterations: int) -> Circuit:
    """Full search circuit: state preparation then ``iterations`` x (oracle; diffuser)."""
    body = oracle.circuit
    c = Circuit(body.qubit_count, list(body.registers), [], set(body.initial_ones))
    for q in oracle.x.qubits:
        c.append(H(q))
    c.append(X(oracle.y))
    c.append(H(oracle.y))
    for _ in range(iterations):
        c.gates.extend(body.gates)
        emit_diffuser(c, oracle.x)
    return c


@dataclass(frozen=True)
class GroverRun:
    instance: SSPInstance
    config: OracleConfig
    iterations: int
    distribution: dict[int, float]
    solutions: frozenset[int]

    def success_probability(self) -> float:
        return sum(self.distribution.get(m, 0.0) for m in self.solutions)

    def most_likely(self) -> int:
        return max(self.distribution, key=self.distribution.__getitem__)

    def sample(self, shots: int, seed: int | None = None) -> dict[int, int]:
        return sample_shots(self.distribution, shots, seed)


def grover_search(
    instance: SSPInstance,
    config: OracleConfig = OracleConfig(),
    iterations: int | None = None,
    budget: int = DEFAULT_QUBIT_BUDGET,
    backend: str | None = None,
) -> GroverRun:
    """Statevector Grover run; ``distribution`` maps selection masks to probabilities."""
    oracle = compile_oracle(instance, config)
    solutions = classical_solutions(instance, config.k)
    if iterations is None:
        iterations = iteration_count(instance.n, len(solutions))
    circ = grover_circuit(oracle, iterations)
    state = simulate(circ, budget=budget, backend=backend)
    norm = state.norm()
    if abs(norm - 1.0) > NORM_TOL:
        raise ArithmeticError(f"state norm drifted to {norm}")
    return GroverRun(instance, config, iterations, measure_register(state, oracle.x), solutions)


__all__ = ["GroverRun", "emit_diffuser", "grover_circuit", "grover_search", "iteration_count"]
