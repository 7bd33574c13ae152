"""
Utility functions for swapsim
"""

import os
import sys
from datetime import datetime
from pathlib import Path
from typing import Callable, Dict, Optional

from dotenv import dotenv_values

from .errors import ConfigError

DEFAULT_SEED = 42


# =========================
# LOGGING
# =========================

def log(msg: str, callback: Optional[Callable[[str], None]] = None) -> None:
    """
    Emit a timestamped progress message.

    Messages go to stderr so CSV written to stdout stays clean.

    Args:
        msg: Message text
        callback: Optional receiver of the formatted line (replaces printing)
    """
    formatted = f"[{datetime.now().strftime('%H:%M:%S')}] {msg}"
    if callback:
        callback(formatted)
    else:
        print(formatted, file=sys.stderr)


def silent(_: str) -> None:
    pass


# =========================
# FILES
# =========================

def ensure_directory(path: str) -> None:
    """
    Create directory if it doesn't exist.

    Args:
        path: Directory path to create
    """
    if path:
        Path(path).mkdir(parents=True, exist_ok=True)


def load_config_file(filepath: str) -> Dict[str, str]:
    """
    Read a key=value configuration file.

    Keys are normalized to lower case with dashes replaced by underscores,
    so both ``tau-max`` and ``TAU_MAX`` address the same setting.

    Raises:
        ConfigError: If the file is missing or a key has no value
    """
    if not os.path.isfile(filepath):
        raise ConfigError(f"Config file not found: {filepath}")

    values = {}
    for key, value in dotenv_values(filepath).items():
        if value is None or value.strip() == "":
            raise ConfigError(f"Config key without value: {key}")
        values[key.strip().lower().replace("-", "_")] = value.strip()
    return values


def default_seed() -> int:
    """Monte Carlo seed from SWAPSIM_SEED, falling back to 42."""
    raw = os.getenv("SWAPSIM_SEED")
    if raw is None or raw.strip() == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"SWAPSIM_SEED must be an integer, got: {raw!r}")
