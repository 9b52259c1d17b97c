"""Backend registry for named artifact stores."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any

from qsmap.core.storage.artifacts import ArtifactBackend
from qsmap.core.storage.backends.filesystem_backend import FilesystemBackend
from qsmap.core.storage.backends.prefixed_backend import PrefixedBackend
from qsmap.core.utils.config import load_and_resolve_config

logger = logging.getLogger(__name__)


class BackendConfigError(Exception):
    """Raised when backend configuration is invalid."""

    pass


class BackendNotFoundError(Exception):
    """Raised when a named backend is not found in configuration."""

    pass


class ArtifactBackendRegistry:
    """Registry for managing named artifact backends.

    Names support dot notation: the first component selects a configured
    backend, the rest becomes a key prefix.

    Examples:
        >>> registry = ArtifactBackendRegistry()
        >>> backend = registry.get_backend("runs")
        >>> backend = registry.get_backend("runs.ipr_scan")
    """

    def __init__(self, configuration: dict[str, dict[str, Any]] | None = None):
        """Initialize the registry.

        Args:
            configuration: Backend configuration dict. If None, loads and resolves
                configuration from configs/stores.py
        """
        if configuration is None:
            configuration = load_and_resolve_config(
                "configs.stores",
                config_name="CONFIGURATION",
                default={},
            )

        self._config = configuration
        self._backend_cache: dict[str, ArtifactBackend] = {}

    def parse_name(self, name: str) -> tuple[str, str]:
        """Split "runs.ipr_scan.N200" into ("runs", "ipr_scan/N200")."""
        parts = name.split(".")
        return parts[0], "/".join(parts[1:])

    def create_backend(self, config: dict[str, Any]) -> ArtifactBackend:
        """Create a backend instance from configuration.

        Raises:
            BackendConfigError: If configuration is invalid
        """
        backend_type = config.get("type")
        if not backend_type:
            raise BackendConfigError("Backend configuration must specify 'type'")

        if backend_type == "filesystem":
            base_path = config.get("base_path")
            if not base_path:
                raise BackendConfigError("Filesystem backend requires 'base_path'")
            backend: ArtifactBackend = FilesystemBackend(base_path=Path(base_path))
            prefix = config.get("prefix")
            return PrefixedBackend(backend, prefix) if prefix else backend

        raise BackendConfigError(f"Unknown backend type: {backend_type}")

    def get_backend(self, name: str, use_cache: bool = True) -> ArtifactBackend:
        """Get a backend instance by (optionally dotted) name.

        Raises:
            BackendNotFoundError: If base name not found in configuration
            BackendConfigError: If backend configuration is invalid
        """
        if use_cache and name in self._backend_cache:
            return self._backend_cache[name]

        base_name, prefix = self.parse_name(name)
        if base_name not in self._config:
            available = ", ".join(self._config.keys())
            raise BackendNotFoundError(
                f"Backend '{base_name}' not found in configuration. "
                f"Available backends: {available or 'none'}"
            )

        if use_cache and base_name in self._backend_cache:
            base_backend = self._backend_cache[base_name]
        else:
            base_backend = self.create_backend(self._config[base_name])
            if use_cache:
                self._backend_cache[base_name] = base_backend

        backend = PrefixedBackend(base_backend, prefix) if prefix else base_backend
        if use_cache:
            self._backend_cache[name] = backend

        logger.info(f"Created backend for '{name}' (base: {base_name}, prefix: {prefix or 'none'})")
        return backend

    def list_backends(self) -> list[str]:
        return list(self._config.keys())

    def register(self, name: str, config: dict[str, Any]) -> None:
        """Register (or replace) a backend configuration."""
        self._config[name] = config
        for key in [k for k in self._backend_cache if k == name or k.startswith(f"{name}.")]:
            del self._backend_cache[key]


_default_registry: ArtifactBackendRegistry | None = None


def get_default_registry() -> ArtifactBackendRegistry:
    """Get the default global registry instance."""
    global _default_registry
    if _default_registry is None:
        _default_registry = ArtifactBackendRegistry()
    return _default_registry


def get_artifact_backend(name: str) -> ArtifactBackend:
    """Get an artifact backend by name from the default registry.

    Examples:
        >>> backend = get_artifact_backend("runs.correlation_scan")
    """
    return get_default_registry().get_backend(name)
