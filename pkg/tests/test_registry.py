"""Tests for the artifact backend registry."""

from __future__ import annotations

import pytest

from qsmap.core.storage import (
    ArtifactBackendRegistry,
    ArtifactStore,
    BackendConfigError,
    BackendNotFoundError,
)
from qsmap.core.storage.backends import FilesystemBackend, PrefixedBackend


class TestArtifactBackendRegistry:
    """Test suite for named backends with dotted prefixes."""

    @pytest.fixture
    def registry(self, tmp_path):
        return ArtifactBackendRegistry(
            {
                "runs": {"type": "filesystem", "base_path": str(tmp_path / "runs")},
                "archive": {
                    "type": "filesystem",
                    "base_path": str(tmp_path / "runs"),
                    "prefix": "archive",
                },
            }
        )

    def test_parse_name(self, registry):
        assert registry.parse_name("runs") == ("runs", "")
        assert registry.parse_name("runs.ipr_scan.N200") == ("runs", "ipr_scan/N200")

    def test_get_plain_backend(self, registry):
        assert isinstance(registry.get_backend("runs"), FilesystemBackend)

    def test_get_dotted_backend(self, registry, tmp_path):
        backend = registry.get_backend("runs.spacing")
        backend.put("summary.json", b"{}")

        assert isinstance(backend, PrefixedBackend)
        assert (tmp_path / "runs" / "spacing" / "summary.json").exists()

    def test_config_prefix(self, registry, tmp_path):
        registry.get_backend("archive").put("a.csv", b"1")

        assert (tmp_path / "runs" / "archive" / "a.csv").exists()

    def test_cache(self, registry):
        assert registry.get_backend("runs.x") is registry.get_backend("runs.x")
        assert registry.get_backend("runs.x", use_cache=False) is not registry.get_backend("runs.x")

    def test_unknown_backend(self, registry):
        with pytest.raises(BackendNotFoundError, match="Available backends: runs, archive"):
            registry.get_backend("scratch")

    def test_missing_type(self):
        registry = ArtifactBackendRegistry({"bad": {"base_path": "/tmp"}})

        with pytest.raises(BackendConfigError, match="must specify 'type'"):
            registry.get_backend("bad")

    def test_unknown_type(self):
        registry = ArtifactBackendRegistry({"bad": {"type": "s3"}})

        with pytest.raises(BackendConfigError, match="Unknown backend type: s3"):
            registry.get_backend("bad")

    def test_missing_base_path(self):
        registry = ArtifactBackendRegistry({"bad": {"type": "filesystem"}})

        with pytest.raises(BackendConfigError, match="requires 'base_path'"):
            registry.get_backend("bad")

    def test_register_replaces_cached(self, registry, tmp_path):
        registry.get_backend("runs.a")
        registry.register("runs", {"type": "filesystem", "base_path": str(tmp_path / "other")})

        registry.get_backend("runs.a").put("x.txt", b"x")

        assert (tmp_path / "other" / "a" / "x.txt").exists()

    def test_default_configuration_loads(self):
        registry = ArtifactBackendRegistry()

        assert {"runs", "archive", "tmp"} <= set(registry.list_backends())

    def test_store_from_name(self, mocker, tmp_path):
        registry = ArtifactBackendRegistry(
            {"runs": {"type": "filesystem", "base_path": str(tmp_path)}}
        )
        mocker.patch("qsmap.core.storage.registry.get_default_registry", return_value=registry)

        store = ArtifactStore.from_name("runs.husimi")
        store.put_bytes("a.txt", b"x")

        assert (tmp_path / "husimi" / "a.txt").exists()


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
