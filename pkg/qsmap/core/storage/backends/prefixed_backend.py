"""Internal prefix wrapper for backends.

Used by the registry to map dotted store names ("runs.ipr_scan") onto key
prefixes ("ipr_scan/") of a base backend.
"""

from __future__ import annotations

from dataclasses import replace

from qsmap.core.storage.artifacts import ArtifactBackend, ArtifactMetadata


class PrefixedBackend(ArtifactBackend):
    """Wrapper that adds a prefix to all keys of another backend."""

    def __init__(self, backend: ArtifactBackend, prefix: str = ""):
        self._backend = backend
        self._prefix = prefix.rstrip("/") + "/" if prefix else ""

    @property
    def prefix(self) -> str:
        return self._prefix

    def _add_prefix(self, key: str) -> str:
        return self._prefix + key

    def _remove_prefix(self, key: str) -> str:
        if self._prefix and key.startswith(self._prefix):
            return key[len(self._prefix) :]
        return key

    def put(
        self,
        key: str,
        data: bytes,
        content_type: str | None = None,
        metadata: dict[str, str] | None = None,
    ) -> ArtifactMetadata:
        stored = self._backend.put(self._add_prefix(key), data, content_type, metadata)
        return replace(stored, key=key)

    def get(self, key: str) -> bytes:
        return self._backend.get(self._add_prefix(key))

    def delete(self, key: str) -> None:
        self._backend.delete(self._add_prefix(key))

    def exists(self, key: str) -> bool:
        return self._backend.exists(self._add_prefix(key))

    def get_metadata(self, key: str) -> ArtifactMetadata:
        return replace(self._backend.get_metadata(self._add_prefix(key)), key=key)

    def list_keys(self, prefix: str | None = None) -> list[str]:
        full_prefix = self._add_prefix(prefix or "")
        return [self._remove_prefix(key) for key in self._backend.list_keys(full_prefix)]
