"""
Configuration loader for dtlab.

Settings come from three layers, later layers winning:
1. Built-in fallback defaults (used when the JSON file is missing)
2. config/dtlab_config.json
3. Environment variables (read from .env via python-dotenv)

Environment variables:
- DTLAB_CONFIG_PATH: alternative JSON config file
- DTLAB_EXACT_CAP: largest n for exact distance enumeration
- DTLAB_INTERPOLATION_CAP: largest variable count for interpolate_poly
- DTLAB_DEFAULT_BUDGET: query budget applied when the CLI gets no --budget
- DTLAB_LOG_LEVEL: default log level for the CLI
"""

import copy
import json
import logging
import os
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

log = logging.getLogger(__name__)

REPO_ROOT = Path(__file__).resolve().parent.parent
CONFIG_PATH = os.getenv("DTLAB_CONFIG_PATH", str(REPO_ROOT / "config" / "dtlab_config.json"))
LOG_LEVEL = os.getenv("DTLAB_LOG_LEVEL", "WARNING")

DEFAULT_CONFIG: Dict[str, Any] = {
    "exact_cap": 24,
    "interpolation_cap": 24,
    "cd_var_cap": 20,
    "truth_table_dp_cap": 16,
    "occam_C": 4,
    "tree_count_base": 8,
    "selection_C": 12,
    "verify_C": 27,
    "appendix_verify_C": 48,
    "estimate_C": 32,
    "universal_set_attempts": 20,
    "size_tester": {"c": 2, "depth_cap_base": 1024},
    "reduced_constants": {"depth_cap_factor": 64, "width": "projected"},
}

# env var -> config key
ENV_OVERRIDES = {
    "DTLAB_EXACT_CAP": "exact_cap",
    "DTLAB_INTERPOLATION_CAP": "interpolation_cap",
    "DTLAB_DEFAULT_BUDGET": "default_budget",
}


def _parse_positive_int(name: str, raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"Invalid {name}: {raw!r}. Valid values are positive integers")
    if value <= 0:
        raise ValueError(f"Invalid {name}: {value}. Valid values are positive integers")
    return value


def load_config(path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load the dtlab configuration.

    Args:
        path: JSON file to read; defaults to CONFIG_PATH

    Returns:
        dict: merged configuration (fallback defaults, file, environment)

    Note:
        A missing file is not an error; the fallback defaults are used and a
        warning is logged.
    """
    config = copy.deepcopy(DEFAULT_CONFIG)
    config_path = path or CONFIG_PATH
    try:
        with open(config_path, "r") as f:
            loaded = json.load(f)
        for key, value in loaded.items():
            if isinstance(value, dict) and isinstance(config.get(key), dict):
                config[key].update(value)
            else:
                config[key] = value
        log.debug("loaded configuration from %s", config_path)
    except FileNotFoundError:
        log.warning("%s not found, using default configuration", config_path)

    for env_name, key in ENV_OVERRIDES.items():
        raw = os.getenv(env_name)
        if raw:
            config[key] = _parse_positive_int(env_name, raw)
    config.setdefault("default_budget", None)
    return config


@lru_cache(maxsize=1)
def get_config() -> Dict[str, Any]:
    """Process-wide configuration, loaded once."""
    return load_config()


def setting(key: str) -> Any:
    """Shortcut for a single top-level configuration value."""
    return get_config()[key]
