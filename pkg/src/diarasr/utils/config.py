import copy
import os
import re
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from .errors import ConfigError

CONFIG_DIR_ENV = "DIARASR_CONFIG_DIR"

# Mirrors config/settings.yaml so the library works without a config directory.
DEFAULT_SETTINGS: Dict[str, Any] = {
    "settings": {
        "logging": {"level": "INFO", "file": None},
        "workers": 4,
        "metrics": {
            "tokenizer": "word",
            "tcpwer_collar": 5.0,
            "der_collar": 0.25,
        },
        "enrollment": {
            "frame_rate": 100.0,
            "instruction": (
                "Transcribe the speech of each enrolled speaker inside its time span. "
                "Answer with one line per triplet, in the given order."
            ),
        },
        "chunking": {
            "default_preset": "alimeeting",
            "presets": {
                "alimeeting": {
                    "max_chunk_duration": 30.0,
                    "max_total_segments": 10,
                    "max_segments_per_speaker": 4,
                },
                "mlc_slm": {
                    "max_chunk_duration": 30.0,
                    "max_total_segments": 8,
                    "max_segments_per_speaker": 6,
                },
            },
        },
        "augmentation": {"p_replace": 0.05, "p_drop": 0.1, "p_shuffle": 0.2, "seed": 0},
        "simulation": {
            "max_duration": 30.0,
            "gap_min": -1.0,
            "gap_max": 1.0,
            "max_utterances_per_speaker": None,
            "embedding_dim": 16,
        },
    }
}

_PLACEHOLDER = re.compile(r"\$\{([A-Za-z_][A-Za-z0-9_]*)(?::-([^}]*))?\}")


def _expand_env(value: Any) -> Any:
    """Expand ${VAR} and ${VAR:-default} placeholders in YAML strings."""
    if isinstance(value, dict):
        return {k: _expand_env(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_expand_env(v) for v in value]
    if isinstance(value, str):
        return _PLACEHOLDER.sub(
            lambda m: os.environ.get(m.group(1), m.group(2) if m.group(2) is not None else ""),
            value,
        )
    return value


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def resolve_config_dir(config_dir: Optional[str] = None) -> Path:
    """Explicit argument, then $DIARASR_CONFIG_DIR (.env honoured), then ./config."""
    if config_dir:
        return Path(config_dir)
    load_dotenv()
    return Path(os.environ.get(CONFIG_DIR_ENV, "config"))


class Config:
    """Configuration management for the toolkit."""

    def __init__(self, config_dir: Optional[str] = None):
        self.config_dir = resolve_config_dir(config_dir)
        self.settings: Dict[str, Any] = copy.deepcopy(DEFAULT_SETTINGS)
        self.load_configs()

    def load_configs(self):
        """Load all configuration files from the config directory."""
        if not self.config_dir.is_dir():
            return
        for config_file in sorted(self.config_dir.glob("*.yaml")):
            try:
                with open(config_file, "r", encoding="utf-8") as f:
                    data = yaml.safe_load(f) or {}
            except yaml.YAMLError as e:
                raise ConfigError(f"{config_file}: invalid YAML: {e}") from e
            if not isinstance(data, dict):
                raise ConfigError(f"{config_file}: top level must be a mapping")
            data = _expand_env(data)
            self.settings[config_file.stem] = _deep_merge(
                self.settings.get(config_file.stem, {}), data
            )

    def get(self, key: str, default: Any = None) -> Any:
        """Get a configuration value using dot notation."""
        keys = key.split(".")
        value = self.settings

        for k in keys:
            if isinstance(value, dict):
                value = value.get(k)
            else:
                return default

            if value is None:
                return default

        return value

    def require(self, key: str) -> Any:
        value = self.get(key)
        if value is None:
            raise ConfigError(f"missing configuration value: {key}")
        return value

    def set(self, key: str, value: Any):
        """Set a configuration value using dot notation."""
        keys = key.split(".")
        target = self.settings

        for k in keys[:-1]:
            target = target.setdefault(k, {})

        target[keys[-1]] = value

    def save(self):
        """Save current configuration to files."""
        self.config_dir.mkdir(parents=True, exist_ok=True)
        for config_name, config_data in self.settings.items():
            config_path = self.config_dir / f"{config_name}.yaml"
            with open(config_path, "w", encoding="utf-8") as f:
                yaml.safe_dump(config_data, f, sort_keys=False)
