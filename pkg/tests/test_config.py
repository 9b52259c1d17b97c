"""Tests for configuration loading, inheritance and run-configuration resolution."""

from __future__ import annotations

import numpy as np
import pytest

from qsmap.classical.estimates import k_break
from qsmap.core.utils.config import (
    ConfigError,
    apply_overrides,
    coerce_value,
    load_key_value_config,
    resolve_config_inheritance,
)
from qsmap.core.utils.env import parse_key_value_file
from qsmap.experiments.config import ScanConfig, load_presets, resolve_config


class TestConfigInheritance:
    """Test suite for configuration inheritance resolution."""

    def test_resolve_inheritance_basic(self):
        """Test basic configuration inheritance."""
        config = {
            "base": {"N": 158, "k": 0.5, "window": 11},
            "ipr_scan": {"__inherits__": "base", "window": 21},
        }

        resolved = resolve_config_inheritance(config)

        assert resolved["base"]["window"] == 11
        assert resolved["ipr_scan"]["N"] == 158
        assert resolved["ipr_scan"]["k"] == 0.5
        assert resolved["ipr_scan"]["window"] == 21
        assert "__inherits__" not in resolved["ipr_scan"]

    def test_resolve_inheritance_multi_level(self):
        """Test multi-level inheritance (grandchild -> child -> parent)."""
        config = {
            "parent": {"N": 100, "k": 0.1, "fmt": "svg"},
            "child": {"__inherits__": "parent", "k": 0.2},
            "grandchild": {"__inherits__": "child", "fmt": "png"},
        }

        resolved = resolve_config_inheritance(config)

        assert resolved["grandchild"] == {"N": 100, "k": 0.2, "fmt": "png"}

    def test_resolve_inheritance_circular_detection(self):
        config = {"a": {"__inherits__": "b"}, "b": {"__inherits__": "a"}}

        with pytest.raises(ConfigError, match="Circular inheritance detected"):
            resolve_config_inheritance(config)

    def test_resolve_inheritance_self_reference(self):
        config = {"a": {"__inherits__": "a"}}

        with pytest.raises(ConfigError, match="Circular inheritance detected"):
            resolve_config_inheritance(config)

    def test_resolve_inheritance_missing_parent(self):
        config = {"child": {"__inherits__": "nonexistent"}}

        with pytest.raises(
            ConfigError, match="inherits from 'nonexistent', but 'nonexistent' not found"
        ):
            resolve_config_inheritance(config)

    def test_resolve_inheritance_empty_config(self):
        assert resolve_config_inheritance({}) == {}


class TestKeyValueOverrides:
    """Test suite for text overrides applied on top of presets."""

    @pytest.fixture
    def preset(self):
        return {"N": 158, "k": 0.5, "N_list": [200, 400], "x_window": [-3.0, 3.0], "fmt": "svg"}

    def test_coerce_follows_template_types(self):
        assert coerce_value("N", " 400 ", 158) == 400
        assert coerce_value("k", "1e-1", 0.5) == pytest.approx(0.1)
        assert coerce_value("N_list", "100, 200,300", [1]) == [100, 200, 300]
        assert coerce_value("flag", "yes", False) is True

    def test_coerce_invalid_value(self):
        with pytest.raises(ConfigError, match="Invalid value for 'N'"):
            coerce_value("N", "many", 158)

    def test_apply_overrides_unknown_key(self, preset):
        with pytest.raises(ConfigError, match="Unknown configuration keys"):
            apply_overrides(preset, {"M": "3"})

    def test_apply_overrides_does_not_mutate_preset(self, preset):
        merged = apply_overrides(preset, {"k": "0.7"})

        assert merged["k"] == pytest.approx(0.7)
        assert preset["k"] == 0.5

    def test_load_key_value_file(self, tmp_path, preset):
        path = tmp_path / "scan.cfg"
        path.write_text(
            "# comment\nN = 400\nx_window = -2, 2  # narrower\nfmt = 'png'\n", encoding="utf-8"
        )

        merged = load_key_value_config(path, preset)

        assert merged["N"] == 400
        assert merged["x_window"] == [-2.0, 2.0]
        assert merged["fmt"] == "png"

    def test_load_key_value_file_missing(self, tmp_path, preset):
        with pytest.raises(ConfigError, match="not found"):
            load_key_value_config(tmp_path / "absent.cfg", preset)

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("N 400\n", encoding="utf-8")

        with pytest.raises(ValueError, match="line 1"):
            parse_key_value_file(path)


class TestScanConfig:
    """Test suite for run configuration validation and derived grids."""

    def test_grid_from_zero_omits_zero(self):
        config = ScanConfig(experiment="correlation_scan", k_min=0.0, k_max=1.8, k_steps=300)

        grid = config.k_grid

        assert len(grid) == 300
        assert grid[0] == pytest.approx(0.006)
        assert grid[-1] == pytest.approx(1.8)
        assert np.all(grid > 0)

    def test_grid_from_positive_start(self):
        config = ScanConfig(experiment="track", k_min=0.3, k_max=0.7, k_steps=81)

        np.testing.assert_allclose(config.k_grid, np.linspace(0.3, 0.7, 81))

    def test_k_break_scale(self):
        config = ScanConfig(
            experiment="ipr_scan", k_scale="k_break", k_min=0.5, k_max=1.0, k_steps=2
        )

        np.testing.assert_allclose(config.k_values(158), [0.5 * k_break(158), k_break(158)])

    @pytest.mark.parametrize(
        "field,value,message",
        [
            ("N", 1, "dimensions must be >= 2"),
            ("k", -0.1, "non-negative"),
            ("window", 10, "must be odd"),
            ("top_m", 13, "top_m must lie"),
            ("k_scale", "log", "k_scale must be one of"),
            ("fmt", "pdf", "fmt must be one of"),
            ("intensity_floor", 1.0, "intensity_floor"),
            ("threads", -1, "threads must be >= 0"),
        ],
    )
    def test_invalid_values(self, field, value, message):
        with pytest.raises(ConfigError, match=message):
            ScanConfig(experiment="spacing", **{field: value})

    def test_non_increasing_grid(self):
        with pytest.raises(ConfigError, match="strictly increasing"):
            ScanConfig(experiment="track", k_min=0.7, k_max=0.3, k_steps=5)

    def test_worker_count_precedence(self, clean_env, monkeypatch):
        assert ScanConfig(experiment="spacing").worker_count == 1

        monkeypatch.setenv("QSMAP_THREADS", "3")
        assert ScanConfig(experiment="spacing").worker_count == 3
        assert ScanConfig(experiment="spacing", threads=5).worker_count == 5

        monkeypatch.setenv("QSMAP_THREADS", "many")
        assert ScanConfig(experiment="spacing").worker_count == 1

    def test_from_dict_rejects_unknown_keys(self):
        with pytest.raises(ConfigError, match="Unknown configuration keys: hbar"):
            ScanConfig.from_dict("spacing", {"hbar": 0.1})

    def test_to_dict_lists(self):
        values = ScanConfig(experiment="spacing").to_dict()

        assert values["N_list"] == [200, 400, 1000, 3000]
        assert values["x_window"] == [-3.0, 3.0]


class TestResolveConfig:
    """Test suite for preset < file < flag precedence."""

    def test_presets_load_and_inherit(self):
        presets = load_presets()

        assert presets["spacing"]["N"] == 158
        assert presets["ipr_scan"]["k_scale"] == "k_break"
        assert presets["track"]["k_steps"] == 81

    def test_dashes_map_to_preset_names(self):
        config = resolve_config("phase-diagram")

        assert config.experiment == "phase_diagram"
        assert 62900 in config.N_list

    def test_precedence(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("N = 200\nk = 0.7\n", encoding="utf-8")

        config = resolve_config("spacing", path, {"k": 0.9, "N": None})

        assert config.N == 200
        assert config.k == pytest.approx(0.9)

    def test_unknown_experiment(self):
        with pytest.raises(ConfigError, match="No preset for experiment 'bogus'"):
            resolve_config("bogus")

    def test_unknown_override(self):
        with pytest.raises(ConfigError, match="command line: depth"):
            resolve_config("spacing", overrides={"depth": 3})

    def test_invalid_override_value(self):
        with pytest.raises(ConfigError, match="must be odd"):
            resolve_config("ipr-scan", overrides={"window": 4})


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
