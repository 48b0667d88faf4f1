# src/diarasr/utils/__init__.py
from .logger import setup_logger
from .config import Config, DEFAULT_SETTINGS
from .errors import (
    BaseError,
    ConfigError,
    EnrollmentError,
    FormatError,
    FusionError,
    MetricError,
    SimulationError,
)

__all__ = [
    "setup_logger",
    "Config",
    "DEFAULT_SETTINGS",
    "BaseError",
    "ConfigError",
    "EnrollmentError",
    "FormatError",
    "FusionError",
    "MetricError",
    "SimulationError",
]
