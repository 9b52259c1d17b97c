"""Artifact storage backends."""

from qsmap.core.storage.backends.filesystem_backend import FilesystemBackend
from qsmap.core.storage.backends.prefixed_backend import PrefixedBackend

__all__ = ["FilesystemBackend", "PrefixedBackend"]
