import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ssporacle.circuit import GateKind, resource_report, reverse_fragment
from ssporacle.compare import EqualityBackend
from ssporacle.errors import (
    EmptyInstance,
    InvalidMask,
    ParseError,
    TargetExceedsMax,
    TooLargeForBruteForce,
    VerificationFailed,
)
from ssporacle.oracle import (
    BENCHMARK_CONFIGS,
    OracleConfig,
    SSPInstance,
    check_restoration,
    classical_solutions,
    compile_oracle,
    compute_only,
    marked_inputs,
    verify_compiled,
    verify_oracle,
)
from ssporacle.qarith import CarryMode, WidthMode, num_bits
from ssporacle.sim import BasisState, run_basis


def enumerate_solutions(values, target, k=0):
    """Plain-Python subset enumeration, independent of the numpy path."""
    n = len(values)
    out = set()
    for mask in range(2**n):
        s = sum(v for i, v in enumerate(values) if mask >> i & 1)
        if s >> k == target >> k:
            out.add(mask)
    return out


def test_layout_single_value():
    o = compile_oracle(SSPInstance((1,), 1), OracleConfig(WidthMode.VAR_ALL, fold_constant=True))
    assert o.circuit.qubit_count == 6
    widths = {r.role: r.width for r in o.circuit.registers}
    assert widths == {"input-x": 1, "ancilla-y": 1, "value": 1, "shadow": 1, "compare": 1, "result": 1}


def test_structure_compute_flip_uncompute():
    o = compile_oracle(SSPInstance((5, 3, 6), 9))
    gates = o.circuit.gates
    assert gates[o.compute_len].kind is GateKind.CX
    assert gates[o.compute_len].controls == (o.result,) and gates[o.compute_len].targets == (o.y,)
    assert gates[o.compute_len + 1:] == reverse_fragment(gates[: o.compute_len])
    assert {g.kind for g in gates} <= {GateKind.X, GateKind.CX, GateKind.CCX, GateKind.MCX}


def _compute_result(instance, config, mask):
    o = compile_oracle(instance, config)
    c = compute_only(o)
    start = BasisState(0, c.qubit_count).with_register(o.x.qubits, mask)
    return run_basis(c, start).bit(o.result)


def test_compute_only_examples():
    inst = SSPInstance((1, 2), 3)
    cfg = OracleConfig()
    assert _compute_result(inst, cfg, 0b11) == 1
    assert _compute_result(inst, cfg, 0b01) == 0
    inst = SSPInstance((3, 1, 2), 3)
    marked = {m for m in range(8) if _compute_result(inst, cfg, m)}
    assert marked == {0b001, 0b110} == enumerate_solutions((3, 1, 2), 3)


def test_classical_solutions_examples():
    assert classical_solutions(SSPInstance((1, 2), 3)) == {0b11}
    assert classical_solutions(SSPInstance((1, 2), 3), k=2) == {0b00, 0b01, 0b10, 0b11}
    assert classical_solutions(SSPInstance((5,), 4)) == set()


def test_classical_solutions_split_path():
    values = tuple(range(1, 23))
    sols = classical_solutions(SSPInstance(values, 30))
    rnd = random.Random(3)
    for mask in rnd.sample(sorted(sols), 50):
        assert sum(v for i, v in enumerate(values) if mask >> i & 1) == 30


def test_classical_solutions_limit():
    with pytest.raises(TooLargeForBruteForce):
        classical_solutions(SSPInstance(tuple([1] * 31), 3))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 20), min_size=1, max_size=10), st.data())
def test_classical_solutions_matches_enumeration(values, data):
    target = data.draw(st.integers(1, sum(values)))
    k = data.draw(st.integers(0, 3))
    assert classical_solutions(SSPInstance(tuple(values), target), k) == enumerate_solutions(values, target, k)


def test_compile_errors():
    with pytest.raises(TargetExceedsMax):
        compile_oracle(SSPInstance((1, 2), 4))
    with pytest.raises(InvalidMask):
        compile_oracle(SSPInstance((1, 2), 3), OracleConfig(k=2))
    with pytest.raises(EmptyInstance):
        SSPInstance((), 3)


def test_verify_all_benchmark_configs():
    for cfg in BENCHMARK_CONFIGS.values():
        rep = verify_oracle(SSPInstance((1, 2), 3), cfg)
        assert rep.passed and rep.inputs == 4 and rep.agreeing == 4


def test_mutation_is_caught():
    inst = SSPInstance((3, 5, 6), 8)
    o = compile_oracle(inst)
    # drop the shadow-copy CCX for bit 0 of the first value
    victim = next(i for i, g in enumerate(o.circuit.gates) if g.kind is GateKind.CCX)
    del o.circuit.gates[victim]
    o.compute_len -= 1
    with pytest.raises(VerificationFailed) as info:
        verify_compiled(inst, o)
    mask = info.value.mask
    assert mask is not None
    expected = mask in classical_solutions(inst)
    assert bool(marked_inputs(o)[mask]) != expected


CONFIGS = [
    OracleConfig(w, s, eq, carry_mode=cm, fold_constant=fold)
    for w, s, eq, cm, fold in itertools.product(
        list(WidthMode), [False, True], list(EqualityBackend), list(CarryMode), [False, True]
    )
]


@pytest.mark.parametrize("seed", range(50))
def test_random_instances_verify(seed):
    rnd = random.Random(seed)
    n = rnd.randint(1, 10)
    values = tuple(rnd.randint(1, 15) for _ in range(n))
    total = sum(values)
    k = rnd.randint(0, min(2, num_bits(total) - 1))
    target = rnd.randint(1, total)
    cfg = rnd.choice(CONFIGS)
    for eq in EqualityBackend:
        cfg = OracleConfig(cfg.width_mode, cfg.sorted, eq, k, cfg.carry_mode, cfg.fold_constant)
        rep = verify_oracle(SSPInstance(values, target), cfg)
        assert rep.solutions == enumerate_solutions(values, target, k)


def test_sorting_preserves_masks():
    inst = SSPInstance((9, 1, 4, 4, 2), 10)
    a = marked_inputs(compile_oracle(inst, OracleConfig(sorted=False)))
    b = marked_inputs(compile_oracle(inst, OracleConfig(sorted=True)))
    assert (a == b).all()


def test_stable_order_for_duplicates():
    o = compile_oracle(SSPInstance((4, 2, 4, 2), 6), OracleConfig(sorted=True))
    assert o.order == (1, 3, 0, 2)


def test_restoration_detects_dirty_uncompute():
    inst = SSPInstance((2, 3), 5)
    o = compile_oracle(inst)
    # first uncompute gate re-flips a same bit after the all-zero test
    del o.circuit.gates[o.compute_len + 1]
    assert check_restoration(o, classical_solutions(inst)) is not None


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(1, 40), min_size=1, max_size=9), st.data())
def test_qubit_monotonicity_across_benchmark_configs(values, data):
    inst = SSPInstance(tuple(values), data.draw(st.integers(1, sum(values))))
    q = [resource_report(compile_oracle(inst, c).circuit).qubits for c in BENCHMARK_CONFIGS.values()]
    assert q[0] >= q[1] >= q[2] >= q[3]


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(1, 40), min_size=1, max_size=9), st.data())
def test_gate_monotonicity_width_modes(values, data):
    # per instance, gates only shrink with narrower registers; the sorted
    # configuration is checked on means in the benchmark tests
    inst = SSPInstance(tuple(values), data.draw(st.integers(1, sum(values))))
    g = [resource_report(compile_oracle(inst, c).circuit).total_gates for c in list(BENCHMARK_CONFIGS.values())[:3]]
    assert g[0] >= g[1] >= g[2]


def test_instance_text_roundtrip(tmp_path):
    inst = SSPInstance((3, 1, 2), 3)
    path = tmp_path / "inst.txt"
    path.write_text(inst.to_text(), encoding="utf-8")
    assert SSPInstance.from_file(path) == inst
    with pytest.raises(ParseError):
        SSPInstance.from_text("values: 1,x\ntarget: 3\n")
