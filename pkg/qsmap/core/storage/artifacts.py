"""Artifact storage for experiment outputs.

Datasets (CSV/parquet), JSON records, flat binary arrays and figures are all
stored as opaque byte blobs under slash-separated keys. Backends are
pluggable; the filesystem backend is the one the CLI uses.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from datetime import datetime
from io import BytesIO
from typing import TYPE_CHECKING, Any

import numpy as np
import polars as pl

if TYPE_CHECKING:
    from matplotlib.figure import Figure

logger = logging.getLogger(__name__)

CSV_FLOAT_PRECISION = 12


def sha256_hex(data: bytes) -> str:
    """Hex SHA-256 digest of ``data``."""
    return hashlib.sha256(data).hexdigest()


@dataclass
class ArtifactMetadata:
    """Metadata for a stored artifact."""

    key: str
    size: int
    sha256: str
    content_type: str | None
    last_modified: datetime
    custom_metadata: dict[str, str] = field(default_factory=dict)


class ArtifactBackend(ABC):
    """Abstract base class for artifact storage backends."""

    @abstractmethod
    def put(
        self,
        key: str,
        data: bytes,
        content_type: str | None = None,
        metadata: dict[str, str] | None = None,
    ) -> ArtifactMetadata:
        """Store an artifact.

        Args:
            key: Slash-separated artifact key
            data: Artifact bytes
            content_type: MIME type of the content
            metadata: Custom metadata key-value pairs

        Returns:
            Metadata of the stored artifact, including its SHA-256 checksum
        """

    @abstractmethod
    def get(self, key: str) -> bytes:
        """Retrieve an artifact.

        Raises:
            ArtifactNotFoundError: If the artifact doesn't exist
        """

    @abstractmethod
    def delete(self, key: str) -> None:
        """Delete an artifact.

        Raises:
            ArtifactNotFoundError: If the artifact doesn't exist
        """

    @abstractmethod
    def exists(self, key: str) -> bool:
        """Check if an artifact exists."""

    @abstractmethod
    def get_metadata(self, key: str) -> ArtifactMetadata:
        """Get metadata for an artifact without reading it.

        Raises:
            ArtifactNotFoundError: If the artifact doesn't exist
        """

    @abstractmethod
    def list_keys(self, prefix: str | None = None) -> list[str]:
        """List artifact keys, sorted, optionally restricted to a prefix."""


class ArtifactStore:
    """High-level artifact interface with typed writers.

    Every successful write is remembered so a run manifest can list all files
    it produced together with their checksums.
    """

    def __init__(self, backend: ArtifactBackend):
        """Initialize the store.

        Args:
            backend: Storage backend implementation (fully configured)
        """
        self._backend = backend
        self._written: dict[str, ArtifactMetadata] = {}
        self._lock = threading.Lock()

    @classmethod
    def from_name(cls, name: str) -> ArtifactStore:
        """Create a store from a named backend configuration.

        Dotted names add a key prefix, e.g. "runs.ipr_scan" stores under
        "ipr_scan/" in the "runs" backend.

        Raises:
            BackendNotFoundError: If the backend name is not found
            BackendConfigError: If the backend configuration is invalid
        """
        from qsmap.core.storage.registry import get_artifact_backend

        return cls(get_artifact_backend(name))

    @property
    def written(self) -> list[ArtifactMetadata]:
        """Artifacts written through this store, sorted by key."""
        with self._lock:
            return [self._written[key] for key in sorted(self._written)]

    def put_bytes(
        self,
        key: str,
        data: bytes,
        content_type: str | None = None,
        metadata: dict[str, str] | None = None,
    ) -> ArtifactMetadata:
        """Store raw bytes and record the write."""
        stored = self._backend.put(key, data, content_type, metadata)
        with self._lock:
            self._written[key] = stored
        return stored

    def put_table(
        self,
        key: str,
        df: pl.DataFrame,
        fmt: str = "csv",
        metadata: dict[str, str] | None = None,
    ) -> ArtifactMetadata:
        """Store a polars DataFrame as CSV (default) or snappy parquet."""
        buffer = BytesIO()
        if fmt == "csv":
            df.write_csv(buffer, float_precision=CSV_FLOAT_PRECISION)
            content_type = "text/csv"
        elif fmt == "parquet":
            df.write_parquet(buffer, compression="snappy", use_pyarrow=True)
            content_type = "application/parquet"
        else:
            raise ValueError(f"Unsupported table format: {fmt}")

        stored = self.put_bytes(key, buffer.getvalue(), content_type, metadata)
        logger.info(f"Stored {len(df)} rows to {key}")
        return stored

    def read_table(self, key: str) -> pl.DataFrame:
        """Read a table written by :meth:`put_table`."""
        data = self._backend.get(key)
        if key.endswith(".parquet"):
            return pl.read_parquet(BytesIO(data))
        return pl.read_csv(BytesIO(data))

    def put_json(
        self, key: str, payload: Any, metadata: dict[str, str] | None = None
    ) -> ArtifactMetadata:
        """Store a JSON document with sorted keys."""
        data = json.dumps(payload, indent=2, sort_keys=True, default=_json_default).encode()
        return self.put_bytes(key, data + b"\n", "application/json", metadata)

    def read_json(self, key: str) -> Any:
        return json.loads(self._backend.get(key))

    def put_array(
        self, key: str, array: np.ndarray, description: str = ""
    ) -> tuple[ArtifactMetadata, ArtifactMetadata]:
        """Store an array as flat little-endian float64 plus a JSON sidecar.

        Complex arrays gain a trailing axis of length 2 holding (real, imag).
        The sidecar lives at ``<key>.json``.

        Returns:
            Metadata of the binary file and of the sidecar
        """
        values = np.asarray(array)
        is_complex = np.iscomplexobj(values)
        if is_complex:
            values = np.stack([values.real, values.imag], axis=-1)
        flat = np.ascontiguousarray(values, dtype="<f8")

        binary = self.put_bytes(key, flat.tobytes(order="C"), "application/octet-stream")
        sidecar = self.put_json(
            f"{key}.json",
            {
                "shape": list(flat.shape),
                "dtype": "<f8",
                "order": "C",
                "complex": is_complex,
                "description": description,
                "sha256": binary.sha256,
            },
        )
        return binary, sidecar

    def read_array(self, key: str) -> np.ndarray:
        """Read an array written by :meth:`put_array` using its sidecar."""
        sidecar = self.read_json(f"{key}.json")
        values = np.frombuffer(self._backend.get(key), dtype=sidecar["dtype"])
        values = values.reshape(sidecar["shape"])
        if sidecar.get("complex"):
            return values[..., 0] + 1j * values[..., 1]
        return values.copy()

    def put_figure(
        self, key: str, fig: Figure, fmt: str = "svg", metadata: dict[str, str] | None = None
    ) -> ArtifactMetadata:
        """Render a matplotlib figure and store it.

        SVG output drops the creation date so reruns produce identical bytes.
        """
        buffer = BytesIO()
        if fmt == "svg":
            fig.savefig(buffer, format="svg", metadata={"Date": None})
            content_type = "image/svg+xml"
        elif fmt == "png":
            fig.savefig(buffer, format="png", dpi=150)
            content_type = "image/png"
        else:
            raise ValueError(f"Unsupported figure format: {fmt}")
        return self.put_bytes(key, buffer.getvalue(), content_type, metadata)

    def get(self, key: str) -> bytes:
        return self._backend.get(key)

    def exists(self, key: str) -> bool:
        return self._backend.exists(key)

    def delete(self, key: str) -> None:
        self._backend.delete(key)
        with self._lock:
            self._written.pop(key, None)

    def get_metadata(self, key: str) -> ArtifactMetadata:
        return self._backend.get_metadata(key)

    def list_keys(self, prefix: str | None = None) -> list[str]:
        return self._backend.list_keys(prefix)


def _json_default(value: Any) -> Any:
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, datetime):
        return value.isoformat()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


# Custom exceptions


class ArtifactStoreError(Exception):
    """Base exception for artifact storage errors."""

    pass


class ArtifactNotFoundError(ArtifactStoreError):
    """Raised when an artifact is not found."""

    pass
