"""Random-instance resource sweeps over the four oracle configurations.

Per-run seeds are ``master_seed XOR h`` where ``h`` is the first 8 bytes
(little-endian) of ``blake2b(f"{n}:{max_value}:{run}")``; instances are
shared across configurations within a cell.
"""
from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .circuit import resource_report
from .errors import InvalidBaseline
from .oracle import BENCHMARK_CONFIGS, OracleConfig, SSPInstance, compile_oracle

CSV_HEADER = ("config", "n", "max_value", "runs", "mean_qubits", "mean_gates")
BASELINE = "fixed32"
TABLE_LABELS = {
    "var-elem": "Sums fixed width",
    "var-all": "Sums varying width",
    "var-all-sorted": "Optimal ordering",
}


@dataclass(frozen=True)
class BenchGrid:
    set_sizes: tuple[int, ...] = tuple(range(5, 101, 5))
    max_values: tuple[int, ...] = (64, 128, 256)
    runs_per_cell: int = 100
    master_seed: int = 0

    def __post_init__(self):
        if not self.set_sizes or min(self.set_sizes) < 1:
            raise ValueError("set sizes must be >= 1")
        if not self.max_values or min(self.max_values) < 1:
            raise ValueError("max values must be >= 1")
        if self.runs_per_cell < 1:
            raise ValueError("runs per cell must be >= 1")


@dataclass(frozen=True)
class BenchRecord:
    config: str
    n: int
    max_value: int
    runs: int
    mean_qubits: float
    mean_gates: float
    mean_compute_gates: float = field(default=float("nan"), compare=False)


def derive_seed(master_seed: int, n: int, max_value: int, run: int) -> int:
    digest = hashlib.blake2b(f"{n}:{max_value}:{run}".encode(), digest_size=8).digest()
    return (master_seed ^ int.from_bytes(digest, "little")) & (2**64 - 1)


def random_instance(n: int, max_value: int, seed: int) -> SSPInstance:
    if n < 1 or max_value < 1:
        raise ValueError("n and max_value must be >= 1")
    rng = np.random.default_rng(seed)
    values = rng.integers(1, max_value, size=n, endpoint=True)
    target = int(rng.integers(1, int(values.sum()), endpoint=True))
    return SSPInstance(tuple(int(v) for v in values), target)


def measure_cell(
    n: int,
    max_value: int,
    runs: int,
    master_seed: int,
    configs: dict[str, OracleConfig] = BENCHMARK_CONFIGS,
) -> list[BenchRecord]:
    totals = {label: np.zeros(3) for label in configs}
    for run in range(runs):
        inst = random_instance(n, max_value, derive_seed(master_seed, n, max_value, run))
        for label, cfg in configs.items():
            oracle = compile_oracle(inst, cfg)
            rep = resource_report(oracle.circuit)
            # compute half plus its share of the one-off preparation X gates
            compute = oracle.compute_len + len(oracle.circuit.initial_ones)
            totals[label] += (rep.qubits, rep.total_gates, compute)
    return [
        BenchRecord(label, n, max_value, runs, *(float(v) for v in totals[label] / runs))
        for label in configs
    ]


def run_benchmark(grid: BenchGrid, progress=None) -> list[BenchRecord]:
    """Counting-only sweep; records come back sorted by (max_value, n, config order)."""
    records = []
    for max_value in sorted(grid.max_values):
        for n in sorted(grid.set_sizes):
            records.extend(measure_cell(n, max_value, grid.runs_per_cell, grid.master_seed))
            if progress is not None:
                progress(n, max_value)
    return records


def percent_saved(baseline: float, optimized: float) -> float:
    if baseline <= 0:
        raise InvalidBaseline(f"baseline must be positive, got {baseline}")
    return 100.0 * (baseline - optimized) / baseline


def to_csv(records: Iterable[BenchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([r.config, r.n, r.max_value, r.runs, f"{r.mean_qubits:.2f}", f"{r.mean_gates:.2f}"])
    return buf.getvalue()


def from_csv(text: str) -> list[BenchRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ValueError(f"expected CSV header {','.join(CSV_HEADER)}")
    return [
        BenchRecord(cfg, int(n), int(mv), int(runs), float(q), float(g))
        for cfg, n, mv, runs, q, g in rows[1:]
    ]


def savings(records: Sequence[BenchRecord], metric: str = "qubits") -> dict[tuple[int, int, str], float]:
    """Percent saved over the fixed-width baseline keyed by (max_value, n, config)."""
    attr = "mean_qubits" if metric == "qubits" else "mean_gates"
    base = {(r.max_value, r.n): getattr(r, attr) for r in records if r.config == BASELINE}
    out = {}
    for r in records:
        if r.config != BASELINE and (r.max_value, r.n) in base:
            out[(r.max_value, r.n, r.config)] = percent_saved(base[(r.max_value, r.n)], getattr(r, attr))
    return out


def _table(title: str, sizes: list[int], rows: list[tuple[str, list[str]]]) -> str:
    header = ["Set size:"] + [f"{n} values" for n in sizes]
    body = [[label] + cells for label, cells in rows]
    widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]

    def fmt(row):
        return "  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(row, widths)))

    return "\n".join([title, fmt(header)] + [fmt(row) for row in body])


def emit_tables(records: Sequence[BenchRecord], sizes: Sequence[int] | None = None) -> tuple[str, str]:
    """Aligned percent-saved tables (qubits, then gates, per max value) and the CSV text."""
    if not records:
        raise ValueError("no benchmark records to tabulate")
    blocks = []
    for metric in ("qubits", "gates"):
        saved = savings(records, metric)
        for mv in sorted({r.max_value for r in records}):
            present = sorted({n for (m, n, _) in saved if m == mv})
            cols = [n for n in (sizes or present) if n in present]
            rows = []
            for cfg, label in TABLE_LABELS.items():
                if any((mv, n, cfg) in saved for n in cols):
                    rows.append((label, [f"{saved[(mv, n, cfg)]:.2f} %" if (mv, n, cfg) in saved else "-" for n in cols]))
            blocks.append(_table(f"Percentage of {metric} saved over Fixed 32 bit (max value = {mv})", cols, rows))
    return "\n\n".join(blocks) + "\n", to_csv(records)


__all__ = [
    "BenchGrid",
    "BenchRecord",
    "CSV_HEADER",
    "derive_seed",
    "emit_tables",
    "from_csv",
    "measure_cell",
    "percent_saved",
    "random_instance",
    "run_benchmark",
    "savings",
    "to_csv",
]
