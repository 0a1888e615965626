"""Command-line entry point: ``ssporacle <subcommand> [flags]``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import BenchGrid, emit_tables, from_csv, run_benchmark
from .circuit import export_text, resource_report
from .compare import EqualityBackend
from .errors import SSPOracleError
from .grover import grover_circuit, grover_search, iteration_count
from .oracle import OracleConfig, SSPInstance, classical_solutions, compile_oracle, verify_oracle
from .qarith import CarryMode, WidthMode
from .sim import DEFAULT_QUBIT_BUDGET


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _sizes(text: str) -> list[int]:
    try:
        lo, hi, step = (int(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:step, got {text!r}") from None
    if lo < 1 or hi < lo or step < 1:
        raise argparse.ArgumentTypeError(f"bad size range {text!r}")
    return list(range(lo, hi + 1, step))


def _add_instance(p: argparse.ArgumentParser) -> None:
    p.add_argument("--set", type=_int_list, help="comma-separated values a1,...,an")
    p.add_argument("--target", type=int)
    p.add_argument("--in", dest="infile", help="instance file ('values:' and 'target:' lines)")


def _add_config(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, default=0, help="ignored low bits of the target (default 0)")
    p.add_argument("--width", choices=[m.value for m in WidthMode], default=WidthMode.VAR_ALL.value)
    order = p.add_mutually_exclusive_group()
    order.add_argument("--sorted", action="store_true", default=None, help="sum in ascending order (default)")
    order.add_argument("--unsorted", dest="sorted", action="store_false")
    p.add_argument("--equality", choices=[b.value for b in EqualityBackend], default="mcx")
    p.add_argument("--fold-target", action="store_true")
    p.add_argument("--carry", choices=[c.value for c in CarryMode], default="fresh")


def _add_out(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output path, or - for stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ssporacle", description="Subset Sum oracle compiler and simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile an oracle and report its resources")
    _add_instance(p), _add_config(p), _add_out(p)

    p = sub.add_parser("verify", help="check the oracle against brute force on every input")
    _add_instance(p), _add_config(p)

    p = sub.add_parser("grover", help="statevector Grover search on a small instance")
    _add_instance(p), _add_config(p)
    p.add_argument("--iterations", type=int)
    p.add_argument("--shots", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_QUBIT_BUDGET, help="statevector qubit budget")

    p = sub.add_parser("export", help="write the full Grover circuit in text form")
    _add_instance(p), _add_config(p), _add_out(p)
    p.add_argument("--iterations", type=int)

    p = sub.add_parser("bench", help="resource sweep over the four benchmark configurations")
    p.add_argument("--sizes", type=_sizes, default=list(range(5, 101, 5)), help="lo:hi:step")
    p.add_argument("--max-values", type=_int_list, default=[64, 128, 256])
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    _add_out(p)

    p = sub.add_parser("table", help="percent-saved tables from a bench CSV")
    p.add_argument("--in", dest="infile", required=True, help="CSV written by 'bench'")
    p.add_argument("--sizes", type=_int_list, help="columns to show (default: all)")
    return parser


def _instance(args) -> SSPInstance:
    if args.infile is not None:
        if args.set is not None or args.target is not None:
            raise UsageError("--in cannot be combined with --set/--target")
        return SSPInstance.from_file(args.infile)
    if args.set is None or args.target is None:
        raise UsageError("give either --in FILE or both --set and --target")
    return SSPInstance(tuple(args.set), args.target)


def _config(args) -> OracleConfig:
    if args.k < 0:
        raise UsageError("--k must be non-negative")
    return OracleConfig(
        width_mode=args.width,
        sorted=True if args.sorted is None else args.sorted,
        equality=args.equality,
        k=args.k,
        carry_mode=args.carry,
        fold_constant=args.fold_target,
    )


def _write(out: str | None, text: str, stdout) -> None:
    if out is None or out == "-":
        stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _report_lines(circuit) -> str:
    rep = resource_report(circuit)
    counts = " ".join(f"{k}={v}" for k, v in rep.gate_counts.items())
    return f"qubits {rep.qubits}\ngates {rep.total_gates} ({counts})\nmax control arity {rep.max_control_arity}\n"


def _run(args, stdout, stderr) -> int:
    cmd = args.command
    if cmd == "compile":
        oracle = compile_oracle(_instance(args), _config(args))
        if args.out is not None:
            _write(args.out, export_text(oracle.circuit), stdout)
            stderr.write(_report_lines(oracle.circuit))
        else:
            stdout.write(_report_lines(oracle.circuit))
    elif cmd == "verify":
        report = verify_oracle(_instance(args), _config(args))
        stdout.write(report.summary() + "\n")
    elif cmd == "grover":
        if args.iterations is not None and args.iterations < 1:
            raise UsageError("--iterations must be >= 1")
        if args.shots is not None and args.shots < 1:
            raise UsageError("--shots must be >= 1")
        inst = _instance(args)
        run = grover_search(inst, _config(args), args.iterations, budget=args.budget)
        n = inst.n
        stdout.write(f"iterations {run.iterations}\n")
        stdout.write(f"success probability {run.success_probability():.6f}\n")
        if args.shots:
            for mask, count in sorted(run.sample(args.shots, args.seed).items(), key=lambda kv: (-kv[1], kv[0])):
                stdout.write(f"{mask:0{n}b} {count}\n")
        else:
            for mask, p in sorted(run.distribution.items(), key=lambda kv: (-kv[1], kv[0])):
                if p > 1e-12:
                    stdout.write(f"{mask:0{n}b} {p:.6f}\n")
    elif cmd == "export":
        inst, cfg = _instance(args), _config(args)
        oracle = compile_oracle(inst, cfg)
        g = args.iterations
        if g is None:
            g = iteration_count(inst.n, len(classical_solutions(inst, cfg.k)))
        elif g < 1:
            raise UsageError("--iterations must be >= 1")
        _write(args.out, export_text(grover_circuit(oracle, g)), stdout)
    elif cmd == "bench":
        if args.runs < 1:
            raise UsageError("--runs must be >= 1")
        if not args.max_values or min(args.max_values) < 1:
            raise UsageError("--max-values must be positive integers")
        grid = BenchGrid(tuple(args.sizes), tuple(args.max_values), args.runs, args.seed)
        records = run_benchmark(grid)
        tables, csv_text = emit_tables(records)
        if args.out is None or args.out == "-":
            stdout.write(csv_text)
        else:
            _write(args.out, csv_text, stdout)
            stdout.write(tables)
    elif cmd == "table":
        records = from_csv(Path(args.infile).read_text(encoding="utf-8"))
        tables, _ = emit_tables(records, args.sizes)
        stdout.write(tables)
    return 0


def run_cli(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    old_out, old_err = sys.stdout, sys.stderr
    sys.stdout, sys.stderr = stdout, stderr
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        try:
            return _run(args, stdout, stderr)
        except UsageError as exc:
            parser.print_usage(stderr)
            stderr.write(f"ssporacle: error: {exc}\n")
            return 2
        except SSPOracleError as exc:
            stderr.write(f"{type(exc).__name__}: {exc}\n")
            return 1
        except (OSError, ValueError) as exc:
            stderr.write(f"{type(exc).__name__}: {exc}\n")
            return 1
    finally:
        sys.stdout, sys.stderr = old_out, old_err


def main() -> None:  # pragma: no cover
    sys.exit(run_cli())


if __name__ == "__main__":  # pragma: no cover
    main()
