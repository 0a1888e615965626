import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ssporacle.circuit import Circuit
from ssporacle.errors import EmptyInstance, InvalidValue, OverlappingOperands, WidthOverflow
from ssporacle.qarith import (
    CarryMode,
    WidthMode,
    emit_full_adder,
    emit_ripple_add,
    num_bits,
    plan_widths,
)
from ssporacle.sim import BasisState, exhaustive_lanes, read_lanes, run_basis, run_lanes


@pytest.mark.parametrize("v,expected", [(0, 1), (1, 1), (7, 3), (8, 4), (255, 8), (256, 9)])
def test_num_bits(v, expected):
    assert num_bits(v) == expected


def test_full_adder_truth_table():
    c = Circuit()
    v, w, cin, s, cout = c.new_register(5, "q").qubits
    emit_full_adder(c, v, w, cin, s, cout)
    assert [g.kind.value for g in c.gates] == ["cx"] * 3 + ["ccx"] * 3
    for bits in itertools.product((0, 1), repeat=3):
        out = run_basis(c, BasisState.from_bits(list(bits) + [0, 0]))
        total = sum(bits)
        assert (out.bit(s), out.bit(cout)) == (total & 1, total >> 1), bits
        assert [out.bit(q) for q in (v, w, cin)] == list(bits)


def test_full_adder_distinct_operands():
    c = Circuit()
    c.new_register(5, "q")
    with pytest.raises(OverlappingOperands):
        emit_full_adder(c, 0, 1, 2, 2, 3)


def _adder(p, q, out_width, mode):
    c = Circuit()
    a = c.new_register(p, "a", "value")
    b = c.new_register(q, "b", "value")
    out = emit_ripple_add(c, a, b, out_width, mode)
    return c, a, b, out


def _exhaustive_sums(p, q, out_width, mode):
    c, a, b, out = _adder(p, q, out_width, mode)
    state = exhaustive_lanes(c.qubit_count, a.qubits + b.qubits)
    run_lanes(c, state)
    lanes = 2 ** (p + q)
    scratch = [qb for qb in range(c.qubit_count) if qb not in out.qubits]
    return (
        read_lanes(state, out.qubits, lanes),
        read_lanes(state, scratch, lanes),
        read_lanes(state, a.qubits + b.qubits, lanes),
    )


def test_ripple_add_three_plus_five():
    c, a, b, out = _adder(2, 3, 4, CarryMode.FRESH)
    start = BasisState(0, c.qubit_count).with_register(a.qubits, 3).with_register(b.qubits, 5)
    assert run_basis(c, start).read(out.qubits) == 8


def test_ripple_add_zero_leaves_carries_clean():
    for mode in CarryMode:
        c, a, b, out = _adder(3, 3, 4, mode)
        end = run_basis(c, BasisState(0, c.qubit_count))
        assert end.value == 0


@pytest.mark.parametrize("mode", list(CarryMode))
@pytest.mark.parametrize("p,q", [(p, q) for p in range(1, 6) for q in range(1, 6)])
def test_ripple_add_exhaustive(p, q, mode):
    for out_width in (max(p, q), max(p, q) + 1, max(p, q) + 3):
        sums, _, inputs = _exhaustive_sums(p, q, out_width, mode)
        for lane, packed in enumerate(inputs):
            x, y = int(packed) & ((1 << p) - 1), int(packed) >> p
            assert sums[lane] == (x + y) % (1 << out_width)


def test_ripple_modes_agree():
    for p in range(1, 5):
        for q in range(1, 5):
            w = max(p, q) + 1
            fresh, _, _ = _exhaustive_sums(p, q, w, CarryMode.FRESH)
            shared, _, _ = _exhaustive_sums(p, q, w, CarryMode.SHARED)
            assert (fresh == shared).all()


def test_output_too_narrow():
    c = Circuit()
    a = c.new_register(3, "a")
    b = c.new_register(2, "b")
    with pytest.raises(WidthOverflow):
        emit_ripple_add(c, a, b, 2)


def test_carry_allocation():
    # fresh: one carry per bit position; the top position is a pure carry here
    c, *_ = _adder(3, 3, 4, CarryMode.FRESH)
    assert c.register("s_c").width == 3
    c, *_ = _adder(3, 3, 3, CarryMode.FRESH)
    assert c.register("s_c").width == 3
    c, *_ = _adder(5, 5, 6, CarryMode.SHARED)
    assert c.register("s_c").width == 1


@pytest.mark.parametrize("p,q", [(1, 1), (2, 3), (4, 4), (5, 2)])
def test_shared_carry_restored_at_each_recycle_point(p, q):
    c, a, b, out = _adder(p, q, max(p, q) + 1, CarryMode.SHARED)
    shared = c.register("s_c").qubits[0]
    touches = [shared in g.qubits for g in c.gates]
    points = [i + 1 for i in range(len(c.gates)) if touches[i] and (i + 1 == len(c.gates) or not touches[i + 1])]
    assert len(points) >= 1
    for end in points:
        prefix = Circuit(c.qubit_count, c.registers, c.gates[:end])
        state = exhaustive_lanes(c.qubit_count, a.qubits + b.qubits)
        run_lanes(prefix, state)
        assert not read_lanes(state, [shared], 2 ** (p + q)).any()


def test_plan_var_all():
    plan = plan_widths((1, 2, 3), WidthMode.VAR_ALL)
    assert plan.element_widths == (1, 2, 2) and plan.sum_widths == (2, 3)
    assert plan.total_width == 3


def test_plan_unsorted_costs_a_qubit():
    assert plan_widths((3, 2, 1), WidthMode.VAR_ALL).sum_widths == (3, 3)
    perms = [plan_widths(p, WidthMode.VAR_ALL).sum_widths for p in itertools.permutations((1, 2, 3))]
    best = plan_widths((1, 2, 3), WidthMode.VAR_ALL).sum_widths
    assert all(all(x <= y for x, y in zip(best, other)) for other in perms)
    assert sum(plan_widths((3, 2, 1), "var-all").sum_widths) == sum(best) + 1


def test_plan_fixed_and_var_elem():
    plan = plan_widths((5,), WidthMode.FIXED32)
    assert plan.element_widths == (32,) and plan.sum_widths == ()
    plan = plan_widths((5, 9, 3), WidthMode.VAR_ELEM)
    assert plan.element_widths == (3, 4, 2) and plan.sum_widths == (5, 5)


def test_plan_errors():
    with pytest.raises(EmptyInstance):
        plan_widths((), WidthMode.VAR_ALL)
    with pytest.raises(InvalidValue):
        plan_widths((3, 0), WidthMode.VAR_ALL)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 300), min_size=1, max_size=12))
def test_plan_invariants(values):
    var_all = plan_widths(values, WidthMode.VAR_ALL)
    var_elem = plan_widths(values, WidthMode.VAR_ELEM)
    fixed = plan_widths(values, WidthMode.FIXED32)
    s = var_all.sum_widths
    assert list(s) == sorted(s)
    if s:
        assert s[-1] == var_all.total_width == num_bits(sum(values))
    assert var_all.qubits <= var_elem.qubits <= fixed.qubits


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 64), min_size=2, max_size=8), st.randoms(use_true_random=False))
def test_ascending_order_minimises_prefix_widths(values, rnd):
    best = plan_widths(sorted(values), WidthMode.VAR_ALL).sum_widths
    shuffled = list(values)
    rnd.shuffle(shuffled)
    other = plan_widths(shuffled, WidthMode.VAR_ALL).sum_widths
    assert all(x <= y for x, y in zip(best, other))
