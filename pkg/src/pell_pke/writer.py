from __future__ import annotations

import csv
from dataclasses import asdict
from pathlib import Path

from rich.console import Console
from rich.table import Table

from .bench import BENCH_COLUMNS, BenchReport, SizeRow


def write_bench_csv(report: BenchReport, output_path: Path) -> Path:
    """Write one CSV row per bench row, with a header of the BenchRow field names."""
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with output_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=BENCH_COLUMNS)
        writer.writeheader()
        for row in report.rows:
            writer.writerow(asdict(row))
    return output_path


def _dominant_pk(row: SizeRow) -> str:
    fixed = row.pk_bits - row.pk_variable_bits
    multiple = fixed // row.n
    if row.pk_variable_bits:
        return f"{multiple}n + {row.pk_variable_bits}"
    return f"{multiple}n"


def build_size_table(rows: list[SizeRow]) -> Table:
    n = rows[0].n if rows else 0
    table = Table(title=f"Payload sizes in bits (n = {n})")
    table.add_column("Scheme")
    table.add_column("Public key", justify="right")
    table.add_column("Secret key", justify="right")
    table.add_column("Plaintext", justify="right")
    table.add_column("Ciphertext", justify="right")
    for row in rows:
        nominal = row.plaintext_bits + row.reserve_bits
        table.add_row(
            row.scheme,
            f"{row.pk_bits} ({_dominant_pk(row)})",
            f"{row.sk_bits} ({row.sk_bits // row.n}n)",
            f"{row.plaintext_bits} ({nominal // row.n}n - {row.reserve_bits})",
            f"{row.ct_bits} ({row.ct_bits // row.n}n)",
        )
    return table


def print_size_table(rows: list[SizeRow], console: Console | None = None) -> None:
    (console or Console()).print(build_size_table(rows))
