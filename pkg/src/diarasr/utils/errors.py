# src/diarasr/utils/errors.py
from typing import Optional, Union


class BaseError(Exception):
    """Base error class for the toolkit"""
    pass


class ConfigError(BaseError):
    """Configuration related errors"""
    pass


class FormatError(BaseError):
    """Malformed RTTM / segment-list / record input.

    The message always names where the problem is: the source (file name or
    format), the line number or record index, and the offending field.
    """

    def __init__(
        self,
        message: str,
        source: Optional[str] = None,
        location: Optional[Union[int, str]] = None,
        field: Optional[str] = None,
    ):
        self.reason = message
        self.source = source
        self.location = location
        self.field = field
        super().__init__(self._render())

    def _render(self) -> str:
        parts = []
        if self.source:
            parts.append(str(self.source))
        if self.location is not None:
            parts.append(str(self.location))
        if self.field:
            parts.append(f"field {self.field}")
        prefix = ":".join(parts)
        return f"{prefix}: {self.reason}" if prefix else self.reason

    def with_source(self, source: str) -> "FormatError":
        return FormatError(self.reason, source=source, location=self.location, field=self.field)


class MetricError(BaseError):
    """Invalid scoring input (negative collar, mixed sessions, missing words)"""
    pass


class EnrollmentError(BaseError):
    """Triplet / prompt construction errors"""
    pass


class SimulationError(BaseError):
    """Mixture simulation and augmentation errors"""
    pass


class FusionError(BaseError):
    """Shape or value violations in the fusion reference"""
    pass
