import json
import logging
import os
from typing import Any, Dict

logger = logging.getLogger(__name__)


def load_config(filepath: str = "config.json") -> Dict[str, Any]:
    """Loads a JSON configuration file.

    The path is tried relative to the package directory first, then as given
    (relative to the working directory or absolute).
    """
    base_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    config_path = os.path.join(base_dir, filepath)

    if not os.path.exists(config_path):
        logger.debug(f"Config file not found at {config_path}. Trying {filepath}.")
        config_path = filepath

    if not os.path.exists(config_path):
        raise FileNotFoundError(f"Config file not found: {config_path}")

    with open(config_path, "r", encoding="utf-8") as f:
        return json.load(f)
