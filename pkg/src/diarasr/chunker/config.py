from dataclasses import dataclass
from typing import Optional

from ..utils.config import Config
from ..utils.errors import ConfigError

DEFAULT_MAX_CHUNK_DURATION = 30.0


@dataclass(frozen=True)
class ChunkConfig:
    """Per-chunk bounds: duration (s), total segments, segments per speaker."""

    max_chunk_duration: float = DEFAULT_MAX_CHUNK_DURATION
    max_total_segments: int = 10
    max_segments_per_speaker: int = 4

    def __post_init__(self):
        if self.max_chunk_duration <= 0:
            raise ConfigError(f"max_chunk_duration must be positive, got {self.max_chunk_duration}")
        if self.max_total_segments <= 0 or self.max_segments_per_speaker <= 0:
            raise ConfigError(
                "segment bounds must be positive, got "
                f"total={self.max_total_segments}, per speaker={self.max_segments_per_speaker}"
            )
        if self.max_segments_per_speaker > self.max_total_segments:
            raise ConfigError(
                f"max_segments_per_speaker ({self.max_segments_per_speaker}) exceeds "
                f"max_total_segments ({self.max_total_segments})"
            )

    @classmethod
    def from_settings(cls, config: Config, preset: Optional[str] = None) -> "ChunkConfig":
        preset = preset or config.get("settings.chunking.default_preset", "alimeeting")
        values = config.get(f"settings.chunking.presets.{preset}")
        if not isinstance(values, dict):
            raise ConfigError(f"unknown chunking preset {preset!r}")
        try:
            return cls(
                max_chunk_duration=float(values["max_chunk_duration"]),
                max_total_segments=int(values["max_total_segments"]),
                max_segments_per_speaker=int(values["max_segments_per_speaker"]),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"chunking preset {preset!r} is incomplete: {e}") from e

    def to_dict(self) -> dict:
        return {
            "max_chunk_duration": self.max_chunk_duration,
            "max_total_segments": self.max_total_segments,
            "max_segments_per_speaker": self.max_segments_per_speaker,
        }


ALIMEETING = ChunkConfig(max_chunk_duration=30.0, max_total_segments=10, max_segments_per_speaker=4)
MLC_SLM = ChunkConfig(max_chunk_duration=30.0, max_total_segments=8, max_segments_per_speaker=6)
