"""Artifact storage for datasets, arrays, records and figures."""

from qsmap.core.storage.artifacts import (
    ArtifactBackend,
    ArtifactMetadata,
    ArtifactNotFoundError,
    ArtifactStore,
    ArtifactStoreError,
    sha256_hex,
)
from qsmap.core.storage.registry import (
    ArtifactBackendRegistry,
    BackendConfigError,
    BackendNotFoundError,
    get_artifact_backend,
    get_default_registry,
)

__all__ = [
    "ArtifactStore",
    "ArtifactBackend",
    "ArtifactMetadata",
    "ArtifactStoreError",
    "ArtifactNotFoundError",
    "sha256_hex",
    "ArtifactBackendRegistry",
    "BackendConfigError",
    "BackendNotFoundError",
    "get_default_registry",
    "get_artifact_backend",
]
