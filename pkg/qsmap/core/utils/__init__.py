"""Configuration and environment helpers."""

from qsmap.core.utils.config import (
    ConfigError,
    apply_overrides,
    load_and_resolve_config,
    load_config_from_module,
    load_key_value_config,
    resolve_config_inheritance,
)
from qsmap.core.utils.env import load_env_file_if_present, parse_key_value_file

__all__ = [
    "ConfigError",
    "apply_overrides",
    "load_and_resolve_config",
    "load_config_from_module",
    "load_key_value_config",
    "resolve_config_inheritance",
    "load_env_file_if_present",
    "parse_key_value_file",
]
