"""Configuration loading utilities using importlib.

Experiment presets, named artifact stores and homoclinic fixtures live in
Python modules under ``configs/`` that expose a ``CONFIGURATION`` dict.
Entries may inherit from one another with the ``"__inherits__"`` key, and a
plain ``key = value`` text file can override any preset field at run time.
"""

from __future__ import annotations

import importlib
import logging
from pathlib import Path
from typing import Any

from qsmap.core.utils.env import parse_key_value_file

logger = logging.getLogger(__name__)


class ConfigError(Exception):
    """Raised when configuration loading, resolution or coercion fails."""

    pass


def load_config_from_module(
    module_path: str,
    config_name: str = "CONFIGURATION",
    default: Any | None = None,
) -> Any:
    """Load a configuration object from a Python module using importlib.

    Args:
        module_path: Dotted module path (e.g., "configs.experiments")
        config_name: Name of the configuration object to retrieve (default: "CONFIGURATION")
        default: Default value to return if loading fails

    Returns:
        The configuration object from the module, or default if loading fails

    Examples:
        >>> presets = load_config_from_module("configs.experiments")
        >>> fixtures = load_config_from_module("configs.homoclinic_fixtures")
    """
    try:
        module = importlib.import_module(module_path)

        if not hasattr(module, config_name):
            logger.warning(f"Module '{module_path}' does not have attribute '{config_name}'")
            return default

        config = getattr(module, config_name)
        logger.debug(f"Loaded configuration from {module_path}.{config_name}")
        return config

    except ImportError as e:
        logger.warning(f"Could not import module '{module_path}': {e}")
        return default

    except Exception as e:
        logger.error(f"Error loading configuration from '{module_path}': {e}")
        return default


def resolve_config_inheritance(config_dict: dict[str, dict[str, Any]]) -> dict[str, dict[str, Any]]:
    """Resolve inheritance in a configuration dictionary.

    Configurations can inherit from other configurations using the "__inherits__" key.
    Child values override parent values; the "__inherits__" key itself is dropped.

    Args:
        config_dict: Configuration dictionary with potential inheritance relationships

    Returns:
        Fully resolved configuration dictionary with all inheritance applied

    Raises:
        ConfigError: If circular inheritance detected or parent not found

    Examples:
        >>> config = {
        ...     "base": {"N": 158, "window": 11},
        ...     "ipr_scan": {"__inherits__": "base", "window": 21},
        ... }
        >>> resolve_config_inheritance(config)["ipr_scan"]["N"]
        158
    """
    resolved_configs: dict[str, dict[str, Any]] = {}

    def _resolve_single(name: str, config: dict[str, Any], visited: set[str]) -> dict[str, Any]:
        if name in visited:
            chain = " -> ".join(visited) + f" -> {name}"
            raise ConfigError(f"Circular inheritance detected: {chain}")

        if name in resolved_configs:
            return resolved_configs[name]

        if "__inherits__" not in config:
            resolved = config.copy()
            resolved_configs[name] = resolved
            return resolved

        parent_name = config["__inherits__"]
        if parent_name not in config_dict:
            raise ConfigError(
                f"Configuration '{name}' inherits from '{parent_name}', "
                f"but '{parent_name}' not found"
            )

        resolved_parent = _resolve_single(parent_name, config_dict[parent_name], visited | {name})

        resolved = resolved_parent.copy()
        for key, value in config.items():
            if key != "__inherits__":
                resolved[key] = value

        logger.debug(f"Resolved inheritance for '{name}' from '{parent_name}'")
        resolved_configs[name] = resolved
        return resolved

    for name, config in config_dict.items():
        if name not in resolved_configs:
            _resolve_single(name, config, set())

    return resolved_configs


def load_and_resolve_config(
    module_path: str,
    config_name: str = "CONFIGURATION",
    default: Any | None = None,
) -> dict[str, dict[str, Any]]:
    """Load configuration from module and resolve all inheritance relationships.

    Args:
        module_path: Dotted module path (e.g., "configs.stores")
        config_name: Name of the configuration object to retrieve
        default: Default value to return if loading fails

    Returns:
        Fully resolved configuration dictionary
    """
    raw_config = load_config_from_module(module_path, config_name, default)

    if raw_config is None or not isinstance(raw_config, dict):
        logger.warning(f"Invalid configuration loaded from {module_path}, using default")
        return default or {}

    try:
        resolved = resolve_config_inheritance(raw_config)
        logger.info(f"Loaded and resolved {len(resolved)} configurations from {module_path}")
        return resolved
    except ConfigError as e:
        logger.error(f"Failed to resolve configuration inheritance: {e}")
        raise


def coerce_value(key: str, raw: str, template: Any) -> Any:
    """Convert a text value to the type of ``template``.

    Lists and tuples are comma separated; their element type follows the first
    element of the template (float when the template is empty).

    Raises:
        ConfigError: If the text cannot be converted
    """
    text = raw.strip()
    try:
        if isinstance(template, bool):
            lowered = text.lower()
            if lowered in {"1", "true", "yes", "on"}:
                return True
            if lowered in {"0", "false", "no", "off"}:
                return False
            raise ValueError(f"not a boolean: {text!r}")
        if isinstance(template, int):
            return int(text)
        if isinstance(template, float):
            return float(text)
        if isinstance(template, list | tuple):
            element = template[0] if template else 0.0
            items = [coerce_value(key, part, element) for part in text.split(",") if part.strip()]
            return type(template)(items)
        if template is None:
            return None if text.lower() in {"", "none", "null"} else text
        return text
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid value for '{key}': {e}")


def apply_overrides(
    preset: dict[str, Any], overrides: dict[str, str], source: str = "overrides"
) -> dict[str, Any]:
    """Return a copy of ``preset`` with text ``overrides`` coerced onto it.

    Raises:
        ConfigError: If an override names a key the preset does not define
    """
    merged = dict(preset)
    unknown = sorted(set(overrides) - set(preset))
    if unknown:
        raise ConfigError(f"Unknown configuration keys in {source}: {', '.join(unknown)}")

    for key, raw in overrides.items():
        merged[key] = coerce_value(key, raw, preset[key])
        logger.debug(f"Override from {source}: {key} = {merged[key]!r}")
    return merged


def load_key_value_config(path: str | Path, preset: dict[str, Any]) -> dict[str, Any]:
    """Apply a ``key = value`` text configuration file on top of a preset.

    Args:
        path: Path to the text file
        preset: Resolved preset whose field types drive coercion

    Returns:
        New configuration dict

    Raises:
        ConfigError: If the file is missing, malformed or names unknown keys
    """
    config_path = Path(path)
    if not config_path.exists():
        raise ConfigError(f"Configuration file not found: {config_path}")

    try:
        overrides = parse_key_value_file(config_path)
    except ValueError as e:
        raise ConfigError(f"Malformed configuration file {config_path}: {e}")

    logger.info(f"Loaded {len(overrides)} settings from {config_path}")
    return apply_overrides(preset, overrides, source=str(config_path))
