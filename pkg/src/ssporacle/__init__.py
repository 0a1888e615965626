"""Subset Sum oracle compiler, simulators and resource benchmarks."""
