from __future__ import annotations

import os

import pytest

from qsmap.core.storage import ArtifactStore
from qsmap.core.storage.backends import FilesystemBackend
from qsmap.quantum.hilbert import TorusHilbert
from qsmap.semiclassics.fixtures import HomoclinicFixture


@pytest.fixture
def clean_env(monkeypatch):
    """Clean environment fixture to isolate tests."""
    original_values = {}
    env_keys = ["QSMAP_THREADS", "QSMAP_OUTPUT_PATH"]

    for key in env_keys:
        if key in os.environ:
            original_values[key] = os.environ[key]
        monkeypatch.delenv(key, raising=False)

    yield

    for key, value in original_values.items():
        monkeypatch.setenv(key, value)


@pytest.fixture
def temp_store(tmp_path):
    """Artifact store on a temporary directory."""
    return ArtifactStore(FilesystemBackend(base_path=tmp_path))


@pytest.fixture
def small_space():
    return TorusHilbert(32)


@pytest.fixture
def reference_fixtures():
    """Invariants at k = 0.5 and a k = 1.447 entry without relevance."""
    return {
        "k0.5": HomoclinicFixture(
            label="k0.5",
            k=0.5,
            S_mean=0.142258,
            delta_S=1.2e-5,
            A_mean=0.53998,
            delta_A=5.8e-4,
        ),
        "k1.447": HomoclinicFixture(label="k1.447", k=1.447),
    }


@pytest.fixture
def fixture_file(tmp_path):
    """JSON fixture file with the k = 0.5 invariants."""
    path = tmp_path / "fixtures.json"
    path.write_text(
        '{"k0.5": {"k": 0.5, "S_mean": 0.142258, "delta_S": 1.2e-5, '
        '"A_mean": 0.53998, "L": null, "mu": [0, 1]}}',
        encoding="utf-8",
    )
    return path
