"""Artifact store configuration.

Maps store names to backend parameters. Dotted names add key prefixes:

    from qsmap.core.storage import ArtifactStore

    store = ArtifactStore.from_name("runs")                  # <root>/
    store = ArtifactStore.from_name("runs.correlation_scan")  # <root>/correlation_scan/

Environment overrides:
    export QSMAP_OUTPUT_PATH=/data/qsmap-runs
"""

from __future__ import annotations

import os
from pathlib import Path

from qsmap.core.utils.env import load_env_file_if_present

load_env_file_if_present()
PROJECT_ROOT = Path(__file__).resolve().parents[1]


def _resolve_default_base_path() -> Path:
    """Return the default output root."""
    configured_path = os.environ.get("QSMAP_OUTPUT_PATH")
    if configured_path:
        return Path(configured_path).expanduser()

    return PROJECT_ROOT / "var" / "runs"


DEFAULT_BASE_PATH = _resolve_default_base_path()


CONFIGURATION = {
    # Default destination of CLI runs
    "runs": {
        "type": "filesystem",
        "base_path": str(DEFAULT_BASE_PATH),
    },
    # Long scans (N >= 1000) kept apart from quick runs
    "archive": {
        "__inherits__": "runs",
        "prefix": "archive",
    },
    # Scratch space
    "tmp": {
        "type": "filesystem",
        "base_path": "/tmp/qsmap",
    },
}
