"""Reporting: console tables, CSV / JSON reports and heatmap grids."""

from knnn.reporting.console import print_benchmark, print_sweep
from knnn.reporting.csv_out import benchmark_csv, sweep_csv
from knnn.reporting.json_out import write_benchmark_json, write_breakdown_json, write_sweep_json

__all__ = [
    "print_benchmark",
    "print_sweep",
    "benchmark_csv",
    "sweep_csv",
    "write_benchmark_json",
    "write_breakdown_json",
    "write_sweep_json",
]
