from __future__ import annotations

import os
from pathlib import Path


def parse_key_value_file(path: str | Path) -> dict[str, str]:
    """Parse ``KEY=VALUE`` (or ``key = value``) lines from a text file.

    Blank lines and lines starting with '#' are ignored, trailing ``# ...``
    comments are stripped and quoted values are unquoted.

    Raises:
        ValueError: If a non-comment line has no '=' or an empty key
    """
    parsed: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")

    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split(" #", 1)[0].strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw_line!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ValueError(f"line {lineno}: empty key")
        parsed[key] = value.strip().strip('"').strip("'")
    return parsed


def load_env_file_if_present(path: str | Path = ".env", override: bool = False) -> dict[str, str]:
    """Load simple KEY=VALUE pairs from a .env file if present.

    Used for ``QSMAP_OUTPUT_PATH`` and ``QSMAP_THREADS``. Returns the loaded
    pairs and updates os.environ for the process.
    """
    env_path = Path(path)
    if not env_path.exists():
        return {}

    loaded = parse_key_value_file(env_path)
    for key, value in loaded.items():
        if override or key not in os.environ:
            os.environ[key] = value
    return loaded
