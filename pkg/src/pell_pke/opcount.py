from __future__ import annotations

from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass


@dataclass(slots=True)
class OperationCounts:
    """Tally of the costly operations performed inside a `count_operations` block."""

    multiplications: int = 0
    inversions: int = 0
    exponentiations: int = 0

    def __add__(self, other: "OperationCounts") -> "OperationCounts":
        return OperationCounts(
            multiplications=self.multiplications + other.multiplications,
            inversions=self.inversions + other.inversions,
            exponentiations=self.exponentiations + other.exponentiations,
        )


_ACTIVE: ContextVar[OperationCounts | None] = ContextVar("pell_pke_operation_counts", default=None)


@contextmanager
def count_operations() -> Iterator[OperationCounts]:
    """Collect operation counts for the current thread/context only.

    Blocks nest: an inner block counts into its own tally and the outer tally
    is untouched while the inner one is active.
    """
    counts = OperationCounts()
    token = _ACTIVE.set(counts)
    try:
        yield counts
    finally:
        _ACTIVE.reset(token)


def record_multiplication() -> None:
    counts = _ACTIVE.get()
    if counts is not None:
        counts.multiplications += 1


def record_inversion() -> None:
    counts = _ACTIVE.get()
    if counts is not None:
        counts.inversions += 1


def record_exponentiation() -> None:
    counts = _ACTIVE.get()
    if counts is not None:
        counts.exponentiations += 1
