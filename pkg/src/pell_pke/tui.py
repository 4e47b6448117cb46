from __future__ import annotations

from dataclasses import dataclass
from threading import Lock
from typing import Any


@dataclass(slots=True)
class CellTaskState:
    task_id: Any
    reps: int
    done: int = 0


class BenchProgressTui:
    """Progress bars for the bench harness: one overall bar plus one bar per (scheme, n) cell.

    Falls back to one summary line per finished cell when disabled or when rich cannot start.
    """

    def __init__(self, enabled: bool = True) -> None:
        self.enabled = enabled
        self.progress: Any | None = None
        self._task_by_cell: dict[str, CellTaskState] = {}
        self._cells_task_id: Any | None = None
        self._lock = Lock()

    def __enter__(self) -> "BenchProgressTui":
        if self.enabled:
            try:
                from rich.console import Console
                from rich.progress import (
                    BarColumn,
                    Progress,
                    SpinnerColumn,
                    TaskProgressColumn,
                    TextColumn,
                    TimeElapsedColumn,
                )

                self.progress = Progress(
                    SpinnerColumn(),
                    TextColumn("[bold cyan]{task.description}"),
                    BarColumn(bar_width=40),
                    TaskProgressColumn(),
                    TextColumn("done {task.fields[done]}/{task.fields[queued]}"),
                    TimeElapsedColumn(),
                    console=Console(stderr=True),
                    transient=False,
                )
                self.progress.start()
            except Exception:
                self.progress = None
                self.enabled = False
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if self.progress is not None:
            self.progress.stop()

    @property
    def active(self) -> bool:
        return self.enabled and self.progress is not None

    def start_cells(self, total_cells: int) -> None:
        if not self.active:
            return
        self._cells_task_id = self.progress.add_task(
            "Cells",
            total=max(1, total_cells),
            completed=0,
            done=0,
            queued=total_cells,
        )

    def finish_cell_count(self) -> None:
        if not self.active or self._cells_task_id is None:
            return
        task = self.progress.tasks[self._cells_task_id]
        done = min(int(task.fields.get("done", 0)) + 1, int(task.fields.get("queued", 0)))
        self.progress.update(self._cells_task_id, advance=1, done=done)

    def start_cell(self, label: str, reps: int) -> None:
        if not self.active:
            return
        with self._lock:
            task_id = self.progress.add_task(label, total=max(1, reps), completed=0, done=0, queued=reps)
            self._task_by_cell[label] = CellTaskState(task_id=task_id, reps=reps)

    def advance_cell(self, label: str, step: int = 1) -> None:
        if not self.active:
            return
        with self._lock:
            state = self._task_by_cell.get(label)
            if state is None:
                return
            state.done = min(state.done + step, state.reps)
        self.progress.update(state.task_id, advance=step, done=state.done)

    def finish_cell(self, label: str) -> None:
        if not self.active:
            print(f"  - Finished {label}")
            return
        state = self._task_by_cell.get(label)
        if state is None:
            return
        self.progress.update(
            state.task_id,
            completed=max(1, state.reps),
            done=state.reps,
            description=f"{label} complete ({state.reps} rep{'s' if state.reps != 1 else ''})",
        )
