from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

__all__ = ["DecodeStatus", "DecodeResult"]


class DecodeStatus(str, Enum):
    CLEAN = "clean"
    CORRECTED = "corrected"
    FAILURE = "failure"


@dataclass(frozen=True)
class DecodeResult:
    """Outcome of one block decode; `count` is the number of corrected symbols."""

    status: DecodeStatus
    count: int = 0

    @property
    def ok(self) -> bool:
        return self.status is not DecodeStatus.FAILURE
