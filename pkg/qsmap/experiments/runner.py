"""Ordered parallel map over independent scan tasks."""

from __future__ import annotations

import logging
import time
from collections.abc import Callable, Sequence
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Literal

logger = logging.getLogger(__name__)

TaskStatus = Literal["ok", "failed", "cancelled"]


class ExperimentError(Exception):
    """Base exception for experiment runs."""

    pass


class ScanTaskError(ExperimentError):
    """Raised when every task of a scan failed and nothing can be written."""

    pass


@dataclass(frozen=True)
class TaskResult:
    name: str
    status: TaskStatus
    value: Any = None
    seconds: float = 0.0
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass
class TaskBatch:
    """Results in submission order; ``interrupted`` is set after Ctrl-C."""

    results: list[TaskResult] = field(default_factory=list)
    interrupted: bool = False

    @property
    def values(self) -> list[Any]:
        return [r.value for r in self.results if r.ok]

    @property
    def failed(self) -> list[TaskResult]:
        return [r for r in self.results if r.status == "failed"]

    @property
    def cancelled(self) -> list[TaskResult]:
        return [r for r in self.results if r.status == "cancelled"]


def _execute(name: str, fn: Callable[[], Any]) -> TaskResult:
    start = time.perf_counter()
    try:
        value = fn()
    except Exception as e:
        elapsed = time.perf_counter() - start
        logger.error(f"Task {name} failed after {elapsed:.2f}s: {e}")
        return TaskResult(name, "failed", seconds=elapsed, error=f"{type(e).__name__}: {e}")
    return TaskResult(name, "ok", value=value, seconds=time.perf_counter() - start)


def run_tasks(tasks: Sequence[tuple[str, Callable[[], Any]]], threads: int = 1) -> TaskBatch:
    """Run ``(name, fn)`` tasks and return results in submission order.

    Exceptions mark a task failed without stopping the others. A
    KeyboardInterrupt cancels everything not yet started; those tasks are
    reported as cancelled and ``interrupted`` is set.
    """
    batch = TaskBatch()
    if threads <= 1:
        for i, (name, fn) in enumerate(tasks):
            try:
                batch.results.append(_execute(name, fn))
            except KeyboardInterrupt:
                logger.warning(f"Interrupted; cancelling {len(tasks) - i} pending tasks")
                batch.interrupted = True
                batch.results.extend(TaskResult(n, "cancelled") for n, _ in tasks[i:])
                break
    else:
        _run_pooled(tasks, threads, batch)

    done = sum(r.ok for r in batch.results)
    logger.info(f"Ran {len(tasks)} tasks on {max(threads, 1)} threads: {done} ok")
    return batch


def _run_pooled(
    tasks: Sequence[tuple[str, Callable[[], Any]]], threads: int, batch: TaskBatch
) -> None:
    pool = ThreadPoolExecutor(max_workers=threads, thread_name_prefix="qsmap")
    futures: list[Future] = [pool.submit(_execute, name, fn) for name, fn in tasks]
    try:
        for future in futures:
            batch.results.append(future.result())
    except KeyboardInterrupt:
        batch.interrupted = True
        pending = sum(not f.done() for f in futures)
        logger.warning(f"Interrupted; cancelling {pending} pending tasks")
        pool.shutdown(wait=True, cancel_futures=True)
        for (name, _), future in zip(tasks[len(batch.results) :], futures[len(batch.results) :]):
            # _execute traps Exception, so a stored exception here is the interrupt itself
            if future.cancelled() or not future.done() or future.exception() is not None:
                batch.results.append(TaskResult(name, "cancelled"))
            else:
                batch.results.append(future.result())
    finally:
        pool.shutdown(wait=True)
