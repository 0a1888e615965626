"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Workloads: exhaustive basis-lane verification of a compiled oracle, and a
statevector Grover run.  Both backends are checked to agree before timing.
"""
import argparse
import time

import numpy as np

from ssporacle import sim
from ssporacle.grover import grover_circuit
from ssporacle.oracle import OracleConfig, SSPInstance, compile_oracle, compute_only
from ssporacle.qarith import CarryMode
from ssporacle.sim import exhaustive_lanes, run_lanes, simulate


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def lane_workload(n):
    rng = np.random.default_rng(n)
    values = rng.integers(1, 64, size=n, endpoint=True)
    inst = SSPInstance(tuple(int(v) for v in values), int(values.sum()) // 2)
    oracle = compile_oracle(inst, OracleConfig())
    circ = compute_only(oracle)
    start = exhaustive_lanes(circ.qubit_count, oracle.x.qubits)
    label = f"lanes  n={n:2d}  2^{n} inputs, {len(circ.gates)} gates"
    return label, lambda backend: run_lanes(circ, start.copy(), backend)


def statevector_workload():
    oracle = compile_oracle(SSPInstance((3, 1, 2), 3), OracleConfig(fold_constant=True, carry_mode=CarryMode.SHARED))
    circ = grover_circuit(oracle, 1)
    label = f"sv     {circ.qubit_count} qubits, {len(circ.gates)} gates"
    return label, lambda backend: simulate(circ, backend=backend).amplitudes


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--skip-statevector", action="store_true")
    args = parser.parse_args()

    if sim.BACKEND != "cython":
        print("compiled kernels are not built; only the numpy fallback is available")
        return
    workloads = [lane_workload(n) for n in (10, 14, 18)]
    if not args.skip_statevector:
        workloads.append(statevector_workload())

    print(f"{'workload':<44} {'cython':>10} {'python':>10} {'speedup':>8}")
    for label, fn in workloads:
        a, b = fn("cython"), fn("python")
        if not np.array_equal(a, b) and not np.allclose(a, b, atol=1e-12):
            raise SystemExit(f"backends disagree on {label}")
        fast = best_of(lambda: fn("cython"), args.repeat)
        slow = best_of(lambda: fn("python"), max(1, args.repeat // 3))
        print(f"{label:<44} {fast:>9.4f}s {slow:>9.4f}s {slow / fast:>7.1f}x")


if __name__ == "__main__":
    main()
