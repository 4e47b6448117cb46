from __future__ import annotations

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field, fields
import random
import statistics
import time

from .codec import (
    VARIABLE_WIDTH_LABELS,
    payload_bits,
    record_from_ciphertext,
    record_from_public_key,
    record_from_secret_key,
)
from .field import gen_context
from .opcount import OperationCounts, count_operations
from .pke import (
    SchemeId,
    capacity_bits,
    decrypt,
    encrypt,
    keygen,
    keygen_keys,
    keygen_setup,
    reserve_bits,
)
from .tui import BenchProgressTui

OPERATIONS = ("keygen", "keygen_setup", "keygen_keys", "encrypt", "decrypt")
_SCHEME_ORDER = {scheme: index for index, scheme in enumerate(SchemeId)}


@dataclass(slots=True)
class BenchRow:
    scheme: str
    n: int
    operation: str
    mean_seconds: float
    std_seconds: float
    reps: int
    exp_count: int
    mul_count: int


BENCH_COLUMNS = tuple(item.name for item in fields(BenchRow))


@dataclass(slots=True)
class BenchReport:
    rows: list[BenchRow]
    timings: dict[tuple[str, int, str], list[float]] = field(default_factory=dict)

    def row(self, scheme: SchemeId, n: int, operation: str) -> BenchRow:
        for item in self.rows:
            if item.scheme == scheme.value and item.n == n and item.operation == operation:
                return item
        raise KeyError((scheme.value, n, operation))


@dataclass(slots=True)
class SizeRow:
    scheme: str
    n: int
    pk_bits: int
    pk_variable_bits: int
    sk_bits: int
    plaintext_bits: int
    reserve_bits: int
    ct_bits: int


@dataclass(slots=True)
class _Sample:
    seconds: float
    counts: OperationCounts


def measure_sizes(bits: int, rng: random.Random) -> list[SizeRow]:
    """Instantiate every scheme over one n-bit modulus and account the serialized payloads."""
    ctx = gen_context(bits, rng)
    rows: list[SizeRow] = []
    for scheme in SchemeId:
        pk, sk = keygen(scheme, bits, rng, ctx=ctx)
        ct = encrypt(rng.getrandbits(capacity_bits(scheme, bits)), pk, rng)

        pk_record = record_from_public_key(pk)
        variable = sum(value.bit_length() for name, value in pk_record.fields if name in VARIABLE_WIDTH_LABELS)
        rows.append(
            SizeRow(
                scheme=scheme.value,
                n=bits,
                pk_bits=payload_bits(pk_record, bits),
                pk_variable_bits=variable,
                sk_bits=payload_bits(record_from_secret_key(sk, scheme), bits),
                plaintext_bits=capacity_bits(scheme, bits),
                reserve_bits=reserve_bits(scheme, bits),
                ct_bits=payload_bits(record_from_ciphertext(ct, pk.q), bits),
            )
        )
    return rows


def _timed(operation, *args, **kwargs):
    with count_operations() as counts:
        started = time.perf_counter()
        result = operation(*args, **kwargs)
        elapsed = time.perf_counter() - started
    return result, _Sample(elapsed, counts)


def _summarize(scheme: SchemeId, n: int, operation: str, samples: list[_Sample]) -> BenchRow:
    seconds = [sample.seconds for sample in samples]
    return BenchRow(
        scheme=scheme.value,
        n=n,
        operation=operation,
        mean_seconds=statistics.fmean(seconds),
        std_seconds=statistics.pstdev(seconds),
        reps=len(samples),
        exp_count=round(statistics.fmean(sample.counts.exponentiations for sample in samples)),
        mul_count=round(statistics.fmean(sample.counts.multiplications for sample in samples)),
    )


def run_cell(
    scheme: SchemeId,
    n: int,
    reps: int,
    seed: int,
    tui: BenchProgressTui | None = None,
) -> tuple[list[BenchRow], dict[tuple[str, int, str], list[float]]]:
    """Time `reps` fresh instances of one (scheme, n) cell.

    The cell's RNG depends only on (seed, scheme, n), so results do not
    depend on which worker runs the cell or in what order.
    """
    rng = random.Random(f"{seed}:{scheme.value}:{n}")
    samples: dict[str, list[_Sample]] = {operation: [] for operation in OPERATIONS}
    label = f"{scheme.value} n={n}"
    if tui is not None:
        tui.start_cell(label, reps)

    for _ in range(reps):
        setup, setup_sample = _timed(keygen_setup, scheme, n, rng)
        (pk, sk), keys_sample = _timed(keygen_keys, setup, rng)
        samples["keygen_setup"].append(setup_sample)
        samples["keygen_keys"].append(keys_sample)
        samples["keygen"].append(
            _Sample(setup_sample.seconds + keys_sample.seconds, setup_sample.counts + keys_sample.counts)
        )

        msg = rng.getrandbits(capacity_bits(scheme, pk.ctx.bits))
        ct, encrypt_sample = _timed(encrypt, msg, pk, rng)
        recovered, decrypt_sample = _timed(decrypt, ct, pk, sk)
        if recovered != msg:
            raise RuntimeError(f"round trip failed for {label}")
        samples["encrypt"].append(encrypt_sample)
        samples["decrypt"].append(decrypt_sample)

        if tui is not None:
            tui.advance_cell(label)

    if tui is not None:
        tui.finish_cell(label)

    rows = [_summarize(scheme, n, operation, samples[operation]) for operation in OPERATIONS]
    timings = {
        (scheme.value, n, operation): [sample.seconds for sample in samples[operation]] for operation in OPERATIONS
    }
    return rows, timings


def bench(
    schemes: Sequence[SchemeId],
    sizes: Sequence[int],
    reps: int,
    seed: int,
    *,
    workers: int = 1,
    tui: BenchProgressTui | None = None,
) -> BenchReport:
    if reps < 1:
        raise ValueError("reps must be at least 1")

    cells = [(scheme, n) for scheme in schemes for n in sizes]
    report = BenchReport(rows=[])
    if tui is not None:
        tui.start_cells(len(cells))

    def _collect(rows: list[BenchRow], timings: dict[tuple[str, int, str], list[float]]) -> None:
        report.rows.extend(rows)
        report.timings.update(timings)
        if tui is not None:
            tui.finish_cell_count()

    max_workers = max(1, workers)
    if max_workers == 1:
        for scheme, n in cells:
            _collect(*run_cell(scheme, n, reps, seed, tui))
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            futures = [executor.submit(run_cell, scheme, n, reps, seed, tui) for scheme, n in cells]
            for future in as_completed(futures):
                _collect(*future.result())

    report.rows.sort(
        key=lambda row: (_SCHEME_ORDER[SchemeId(row.scheme)], row.n, OPERATIONS.index(row.operation))
    )
    return report


def keygen_trend(report: BenchReport, n: int = 2048) -> str | None:
    """Compare median keygen times of the parameter schemes with the points scheme at size n."""
    medians: dict[SchemeId, float] = {}
    for scheme in SchemeId:
        timings = report.timings.get((scheme.value, n, "keygen"))
        if timings:
            medians[scheme] = statistics.median(timings)
    if SchemeId.POINTS not in medians or len(medians) < 2:
        return None

    baseline = medians[SchemeId.POINTS]
    parts = [f"points {baseline:.6f}s"]
    for scheme in (SchemeId.PARAMETERS, SchemeId.ALTERNATIVE):
        if scheme in medians:
            verdict = "no slower" if medians[scheme] <= baseline else "slower"
            parts.append(f"{scheme.value} {medians[scheme]:.6f}s ({verdict})")
    return f"Keygen median at n={n}: " + " | ".join(parts)
