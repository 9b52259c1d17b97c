"""Run manifest: configuration echo, task outcomes and checksums of every output."""

from __future__ import annotations

import logging
import time
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import UTC, datetime
from importlib.metadata import PackageNotFoundError, version
from typing import Any

from qsmap.core.storage import ArtifactStore
from qsmap.experiments.config import ScanConfig
from qsmap.experiments.runner import TaskBatch, TaskResult

logger = logging.getLogger(__name__)

MANIFEST_KEY = "manifest.json"


def code_version() -> str:
    try:
        return version("qsmap")
    except PackageNotFoundError:
        return "unknown"


@dataclass
class RunManifest:
    """Single-writer record of one CLI run.

    Tasks are appended by the main thread only; files are taken from the
    store's write log when the manifest is written, sorted by key.
    """

    config: ScanConfig
    started_at: datetime = field(default_factory=lambda: datetime.now(UTC))
    tasks: list[TaskResult] = field(default_factory=list)
    provenance: dict[str, str] = field(default_factory=dict)
    summary: dict[str, Any] = field(default_factory=dict)
    interrupted: bool = False

    def record_batch(self, batch: TaskBatch) -> None:
        self.tasks.extend(batch.results)
        self.interrupted = self.interrupted or batch.interrupted

    @contextmanager
    def task(self, name: str) -> Iterator[None]:
        """Time a single in-line task; a failure is recorded and re-raised."""
        start = time.perf_counter()
        try:
            yield
        except Exception as e:
            elapsed = time.perf_counter() - start
            self.tasks.append(
                TaskResult(name, "failed", seconds=elapsed, error=f"{type(e).__name__}: {e}")
            )
            raise
        self.tasks.append(TaskResult(name, "ok", seconds=time.perf_counter() - start))

    def set_provenance(self, output: str, source: str) -> None:
        self.provenance[output] = source

    @property
    def partial(self) -> bool:
        return self.interrupted or any(t.status != "ok" for t in self.tasks)

    @property
    def status(self) -> str:
        if self.interrupted:
            return "interrupted"
        return "partial" if self.partial else "complete"

    def to_dict(self, store: ArtifactStore) -> dict[str, Any]:
        finished = datetime.now(UTC)
        return {
            "experiment": self.config.experiment,
            "status": self.status,
            "code_version": code_version(),
            "config": self.config.to_dict(),
            "window": self.config.window,
            "thresholds": {
                "intensity_threshold": self.config.intensity_threshold,
                "intensity_floor": self.config.intensity_floor,
            },
            "started_at": self.started_at.isoformat(),
            "finished_at": finished.isoformat(),
            "wall_seconds": (finished - self.started_at).total_seconds(),
            "tasks": [
                {
                    "name": t.name,
                    "status": t.status,
                    "seconds": round(t.seconds, 6),
                    "error": t.error,
                }
                for t in self.tasks
            ],
            "files": [
                {"key": meta.key, "sha256": meta.sha256, "size": meta.size}
                for meta in store.written
                if meta.key != MANIFEST_KEY
            ],
            "provenance": dict(sorted(self.provenance.items())),
            "summary": self.summary,
        }

    def write(self, store: ArtifactStore) -> dict[str, Any]:
        payload = self.to_dict(store)
        store.put_json(MANIFEST_KEY, payload)
        failed = sum(t.status == "failed" for t in self.tasks)
        cancelled = sum(t.status == "cancelled" for t in self.tasks)
        logger.info(
            f"Manifest written: {len(payload['files'])} files, {len(self.tasks)} tasks "
            f"({failed} failed, {cancelled} cancelled)"
        )
        return payload
