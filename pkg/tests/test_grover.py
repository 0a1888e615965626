import math

import numpy as np
import pytest

from ssporacle.circuit import Circuit
from ssporacle.compare import EqualityBackend
from ssporacle.errors import NoSolutions, QubitBudgetExceeded
from ssporacle.grover import emit_diffuser, grover_circuit, grover_search, iteration_count
from ssporacle.oracle import OracleConfig, SSPInstance, compile_oracle
from ssporacle.qarith import CarryMode
from ssporacle.sim import NORM_TOL, PROB_TOL, StateVector, analytic_grover_probability, simulate


@pytest.mark.parametrize("n,m,g", [(2, 1, 1), (10, 1, 25), (4, 2, 2)])
def test_iteration_count(n, m, g):
    assert iteration_count(n, m) == g


def test_iteration_count_no_solutions():
    with pytest.raises(NoSolutions):
        iteration_count(3, 0)


def _random_state(rng, nq):
    v = rng.normal(size=2**nq) + 1j * rng.normal(size=2**nq)
    return StateVector(v / np.linalg.norm(v))


@pytest.mark.parametrize("nq", [1, 2, 3, 4])
def test_diffuser_is_an_involution(nq):
    c = Circuit()
    x = c.new_register(nq, "x", "input-x")
    emit_diffuser(c, x)
    emit_diffuser(c, x)
    psi = _random_state(np.random.default_rng(nq), nq)
    out = simulate(c, psi)
    np.testing.assert_allclose(out.amplitudes, psi.amplitudes, atol=1e-9)


@pytest.mark.parametrize("nq", [1, 2, 3, 4])
def test_diffuser_fixes_uniform_state(nq):
    c = Circuit()
    x = c.new_register(nq, "x", "input-x")
    emit_diffuser(c, x)
    uniform = StateVector(np.full(2**nq, 2 ** (-nq / 2), dtype=complex))
    out = simulate(c, uniform).amplitudes
    phase = out[0] / uniform.amplitudes[0]
    assert abs(abs(phase) - 1) < 1e-12
    np.testing.assert_allclose(out, phase * uniform.amplitudes, atol=1e-12)


def test_single_qubit_grover_step():
    # N = 2 with |1> marked: one step leaves p(1) = sin^2(3 pi / 4) = 1/2
    c = Circuit()
    x = c.new_register(1, "x", "input-x")
    c.h(0)
    c.z(0)
    emit_diffuser(c, x)
    probs = simulate(c).probabilities()
    assert abs(probs[1] - analytic_grover_probability(1, 1, 1)) < 1e-12
    assert abs(probs[1] - 0.5) < 1e-12


def test_two_value_instance_is_certain():
    cfg = OracleConfig(sorted=True, equality=EqualityBackend.LOGSTAR, fold_constant=True)
    run = grover_search(SSPInstance((1, 2), 3), cfg)
    assert run.iterations == 1
    assert abs(run.distribution[0b11] - 1.0) < PROB_TOL
    over = grover_search(SSPInstance((1, 2), 3), cfg, iterations=2)
    assert over.distribution[0b11] < run.distribution[0b11]


def test_three_value_instance():
    # fresh carries would need 27 qubits; the shared carry keeps this at 25
    cfg = OracleConfig(fold_constant=True, carry_mode=CarryMode.SHARED)
    run = grover_search(SSPInstance((3, 1, 2), 3), cfg)
    assert run.solutions == {0b001, 0b110}
    assert run.success_probability() >= 0.9
    assert run.success_probability() == pytest.approx(analytic_grover_probability(3, 2, run.iterations), abs=PROB_TOL)


@pytest.mark.parametrize(
    "values,target,k",
    [((1, 1), 1, 0), ((1, 1), 2, 0), ((1, 2), 2, 1), ((2, 1), 1, 0), ((1, 3), 2, 1), ((1, 1, 1), 2, 0), ((1, 1, 2), 2, 0)],
)
def test_success_matches_analytic(values, target, k):
    inst = SSPInstance(values, target)
    run = grover_search(inst, OracleConfig(fold_constant=True, k=k))
    m = len(run.solutions)
    n = inst.n
    p = run.success_probability()
    assert p == pytest.approx(analytic_grover_probability(n, m, run.iterations), abs=PROB_TOL)
    assert p >= max(m / 2**n, 0.5) - PROB_TOL
    assert abs(sum(run.distribution.values()) - 1) < NORM_TOL
    if 2 * m == 2**n:
        return  # theta = pi/4: every iteration leaves the distribution uniform
    top = max(run.distribution.values())
    assert {mask for mask, q in run.distribution.items() if abs(q - top) < 1e-9} <= run.solutions


def test_grover_circuit_norm_preserved():
    o = compile_oracle(SSPInstance((1, 1, 1), 2), OracleConfig(fold_constant=True))
    state = simulate(grover_circuit(o, 2))
    assert abs(state.norm() - 1) < NORM_TOL


def test_budget_and_no_solution_errors():
    with pytest.raises(QubitBudgetExceeded):
        grover_search(SSPInstance((3, 1, 2), 3), OracleConfig(), budget=20)
    with pytest.raises(NoSolutions):
        grover_search(SSPInstance((5,), 4), OracleConfig())


def test_sampling_is_seeded():
    run = grover_search(SSPInstance((1, 1), 1), OracleConfig(fold_constant=True))
    a = run.sample(500, seed=3)
    assert a == run.sample(500, seed=3)
    assert sum(a.values()) == 500
    # half the inputs are marked, so the output stays uniform
    assert math.isclose(run.success_probability(), 0.5, abs_tol=PROB_TOL)
    assert all(math.isclose(q, 0.25, abs_tol=PROB_TOL) for q in run.distribution.values())
