"""Filesystem backend implementation for artifact storage."""

from __future__ import annotations

import json
import logging
from datetime import UTC, datetime
from pathlib import Path

from qsmap.core.storage.artifacts import (
    ArtifactBackend,
    ArtifactMetadata,
    ArtifactNotFoundError,
    ArtifactStoreError,
    sha256_hex,
)

logger = logging.getLogger(__name__)

META_SUFFIX = ".meta"


class FilesystemBackend(ArtifactBackend):
    """Filesystem implementation of the artifact backend.

    Stores artifacts as files under a base directory with metadata (size,
    checksum, content type, custom fields) in accompanying ``.meta`` JSON files.
    """

    def __init__(self, base_path: str | Path):
        """Initialize filesystem backend.

        Args:
            base_path: Base directory path for storing artifacts
        """
        self._base_path = Path(base_path)
        self._base_path.mkdir(parents=True, exist_ok=True)
        logger.info(f"Initialized filesystem backend at: {self._base_path}")

    @property
    def base_path(self) -> Path:
        return self._base_path

    def _get_path(self, key: str) -> Path:
        normalized_key = Path(key).as_posix()
        path = (self._base_path / normalized_key).resolve()
        if not path.is_relative_to(self._base_path.resolve()):
            raise ArtifactStoreError(f"Key escapes the storage root: {key}")
        return path

    def _get_metadata_path(self, key: str) -> Path:
        path = self._get_path(key)
        return path.with_suffix(path.suffix + META_SUFFIX)

    def _save_metadata(self, meta: ArtifactMetadata) -> None:
        payload = {
            "key": meta.key,
            "size": meta.size,
            "sha256": meta.sha256,
            "content_type": meta.content_type,
            "last_modified": meta.last_modified.isoformat(),
            "custom_metadata": meta.custom_metadata,
        }
        metadata_path = self._get_metadata_path(meta.key)
        metadata_path.parent.mkdir(parents=True, exist_ok=True)
        metadata_path.write_text(json.dumps(payload, indent=2), encoding="utf-8")

    def put(
        self,
        key: str,
        data: bytes,
        content_type: str | None = None,
        metadata: dict[str, str] | None = None,
    ) -> ArtifactMetadata:
        """Store an artifact on disk and write its sidecar."""
        try:
            path = self._get_path(key)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(data)

            meta = ArtifactMetadata(
                key=key,
                size=len(data),
                sha256=sha256_hex(data),
                content_type=content_type or "application/octet-stream",
                last_modified=datetime.now(UTC),
                custom_metadata=dict(metadata or {}),
            )
            self._save_metadata(meta)
            logger.info(f"Stored artifact: {key} ({meta.size} bytes)")
            return meta

        except ArtifactStoreError:
            raise
        except Exception as e:
            raise ArtifactStoreError(f"Failed to store artifact {key}: {e}")

    def get(self, key: str) -> bytes:
        """Retrieve an artifact from disk."""
        path = self._get_path(key)
        if not path.exists():
            raise ArtifactNotFoundError(f"Artifact not found: {key}")
        try:
            return path.read_bytes()
        except Exception as e:
            raise ArtifactStoreError(f"Failed to retrieve artifact {key}: {e}")

    def delete(self, key: str) -> None:
        """Delete an artifact and its sidecar."""
        path = self._get_path(key)
        if not path.exists():
            raise ArtifactNotFoundError(f"Artifact not found: {key}")
        try:
            path.unlink()
            metadata_path = self._get_metadata_path(key)
            if metadata_path.exists():
                metadata_path.unlink()
            logger.info(f"Deleted artifact: {key}")
        except Exception as e:
            raise ArtifactStoreError(f"Failed to delete artifact {key}: {e}")

    def exists(self, key: str) -> bool:
        return self._get_path(key).exists()

    def get_metadata(self, key: str) -> ArtifactMetadata:
        """Load the sidecar, or rebuild it from the file when the sidecar is missing."""
        path = self._get_path(key)
        if not path.exists():
            raise ArtifactNotFoundError(f"Artifact not found: {key}")

        metadata_path = self._get_metadata_path(key)
        try:
            if not metadata_path.exists():
                data = path.read_bytes()
                return ArtifactMetadata(
                    key=key,
                    size=len(data),
                    sha256=sha256_hex(data),
                    content_type="application/octet-stream",
                    last_modified=datetime.fromtimestamp(path.stat().st_mtime, tz=UTC),
                )

            payload = json.loads(metadata_path.read_text(encoding="utf-8"))
            return ArtifactMetadata(
                key=payload["key"],
                size=payload["size"],
                sha256=payload["sha256"],
                content_type=payload.get("content_type"),
                last_modified=datetime.fromisoformat(payload["last_modified"]),
                custom_metadata=payload.get("custom_metadata", {}),
            )
        except Exception as e:
            raise ArtifactStoreError(f"Failed to get metadata for {key}: {e}")

    def list_keys(self, prefix: str | None = None) -> list[str]:
        """List stored artifact keys (sidecars excluded), sorted."""
        keys = []
        for path in sorted(self._base_path.rglob("*")):
            if path.is_dir() or path.suffix == META_SUFFIX:
                continue
            rel_path = path.relative_to(self._base_path).as_posix()
            if prefix and not rel_path.startswith(prefix):
                continue
            keys.append(rel_path)
        return keys
