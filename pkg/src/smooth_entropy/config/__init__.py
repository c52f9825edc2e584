"""Configuration module for smooth_entropy."""

from .app_config import load_config
from .numerics import NumericsConfig, config

__all__ = [
    "NumericsConfig",
    "config",
    "load_config",
]
