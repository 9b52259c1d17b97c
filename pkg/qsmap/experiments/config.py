"""Run configuration of the experiment CLI.

A run starts from a named preset in ``configs/experiments.py``, then applies
an optional ``key = value`` file and finally explicit command-line flags.
"""

from __future__ import annotations

import logging
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any

import numpy as np

from qsmap.classical.estimates import k_break
from qsmap.core.utils.config import (
    ConfigError,
    load_and_resolve_config,
    load_key_value_config,
)

logger = logging.getLogger(__name__)

PRESET_MODULE = "configs.experiments"
MAX_GALLERY = 12
K_SCALES = ("absolute", "k_break")
FIGURE_FORMATS = ("svg", "png")


@dataclass(frozen=True)
class ScanConfig:
    """Resolved settings of one experiment run.

    ``k_min``/``k_max``/``k_steps`` describe the k grid; with
    ``k_scale="k_break"`` the grid is in units of k_break(N) and every N gets
    its own absolute grid. A grid starting at 0 omits k = 0 itself (the
    resonance state does not exist there) and keeps ``k_steps`` points.
    """

    experiment: str
    N: int = 158
    k: float = 0.5
    N_list: tuple[int, ...] = (200, 400, 1000, 3000)
    k_min: float = 0.0
    k_max: float = 1.8
    k_steps: int = 300
    k_scale: str = "absolute"
    window: int = 11
    intensity_threshold: float = 5e-3
    intensity_floor: float = 5e-6
    tol: float = 1e-3
    top_m: int = 7
    alpha: float = 14.0
    chaotic_seeds: int = 20
    chaotic_steps: int = 10_000
    chaotic_spread: float = 1e-3
    grid_size: int = 128
    manifold_length: float = 3.0
    A_max: float = 1.0
    x_window: tuple[float, ...] = (-3.0, 3.0)
    special_points: int = 161
    fmt: str = "svg"
    threads: int = 0
    out: str = ""

    def __post_init__(self) -> None:
        if self.N < 2 or any(n < 2 for n in self.N_list):
            raise ConfigError(
                f"Hilbert space dimensions must be >= 2: N={self.N}, N_list={self.N_list}"
            )
        if self.k < 0:
            raise ConfigError(f"k must be non-negative, got {self.k}")
        if self.k_steps < 1:
            raise ConfigError(f"k_steps must be >= 1, got {self.k_steps}")
        if self.k_min < 0 or (self.k_steps > 1 and not self.k_max > self.k_min):
            raise ConfigError(
                f"k grid must be strictly increasing from k_min >= 0: "
                f"[{self.k_min}, {self.k_max}] in {self.k_steps} steps"
            )
        if self.k_scale not in K_SCALES:
            raise ConfigError(f"k_scale must be one of {K_SCALES}, got {self.k_scale!r}")
        if self.window < 1 or self.window % 2 == 0:
            raise ConfigError(f"Running-average window must be odd and >= 1, got {self.window}")
        if not 0 < self.intensity_floor <= self.intensity_threshold:
            raise ConfigError(
                f"Need 0 < intensity_floor <= intensity_threshold, got "
                f"{self.intensity_floor} and {self.intensity_threshold}"
            )
        if not 1 <= self.top_m <= MAX_GALLERY:
            raise ConfigError(f"top_m must lie in 1..{MAX_GALLERY}, got {self.top_m}")
        if len(self.x_window) != 2 or not self.x_window[0] < self.x_window[1]:
            raise ConfigError(f"x_window must be an increasing pair, got {self.x_window}")
        if self.fmt not in FIGURE_FORMATS:
            raise ConfigError(f"fmt must be one of {FIGURE_FORMATS}, got {self.fmt!r}")
        if self.grid_size < 16:
            raise ConfigError(f"grid_size must be >= 16, got {self.grid_size}")
        if self.threads < 0:
            raise ConfigError(f"threads must be >= 0, got {self.threads}")

    @classmethod
    def from_dict(cls, experiment: str, values: dict[str, Any]) -> ScanConfig:
        known = {f.name for f in fields(cls)} - {"experiment"}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f"Unknown configuration keys: {', '.join(unknown)}")
        converted = {
            key: tuple(value) if isinstance(value, list) else value
            for key, value in values.items()
        }
        try:
            return cls(experiment=experiment, **converted)
        except TypeError as e:
            raise ConfigError(f"Invalid configuration for '{experiment}': {e}")

    @property
    def k_grid(self) -> np.ndarray:
        """Grid points in the configured scale (absolute k or k/k_break)."""
        if self.k_min == 0.0:
            return self.k_max * np.arange(1, self.k_steps + 1) / self.k_steps
        return np.linspace(self.k_min, self.k_max, self.k_steps)

    def k_values(self, N: int | None = None) -> np.ndarray:
        """Absolute k grid for dimension ``N`` (defaults to ``self.N``)."""
        if self.k_scale == "k_break":
            return self.k_grid * k_break(N or self.N)
        return self.k_grid

    @property
    def worker_count(self) -> int:
        """Threads to use: explicit setting, else QSMAP_THREADS, else 1."""
        if self.threads > 0:
            return self.threads
        raw = os.environ.get("QSMAP_THREADS", "")
        try:
            return max(1, int(raw)) if raw else 1
        except ValueError:
            logger.warning(f"Ignoring invalid QSMAP_THREADS={raw!r}")
            return 1

    def to_dict(self) -> dict[str, Any]:
        return {
            key: list(value) if isinstance(value, tuple) else value
            for key, value in asdict(self).items()
        }


def load_presets(module_path: str = PRESET_MODULE) -> dict[str, dict[str, Any]]:
    presets = load_and_resolve_config(module_path, default={})
    if not presets:
        raise ConfigError(f"No experiment presets found in {module_path}")
    return presets


def resolve_config(
    experiment: str,
    config_file: str | Path | None = None,
    overrides: dict[str, Any] | None = None,
    presets: dict[str, dict[str, Any]] | None = None,
) -> ScanConfig:
    """Preset < key-value file < explicit overrides.

    ``overrides`` carry already-typed values (None entries are ignored).

    Raises:
        ConfigError: If the preset is unknown or a value is invalid
    """
    presets = presets if presets is not None else load_presets()
    preset_name = experiment.replace("-", "_")
    if preset_name not in presets:
        raise ConfigError(
            f"No preset for experiment '{experiment}'. Available: {', '.join(sorted(presets))}"
        )
    values = dict(presets[preset_name])

    if config_file is not None:
        values = load_key_value_config(config_file, values)

    explicit = {key: value for key, value in (overrides or {}).items() if value is not None}
    unknown = sorted(set(explicit) - set(values))
    if unknown:
        raise ConfigError(f"Unknown configuration keys in command line: {', '.join(unknown)}")
    values.update(explicit)

    config = ScanConfig.from_dict(preset_name, values)
    logger.debug(f"Resolved configuration for {preset_name}: {config.to_dict()}")
    return config
