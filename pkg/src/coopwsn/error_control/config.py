from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..codecs import CodeKind, CodeSpec
from .frames import ACK_BITS

__all__ = ["Strategy", "ACK_ERROR_MODELS", "ProtocolConfig"]

ACK_ERROR_MODELS = ("ideal", "same_channel")


class Strategy(str, Enum):
    FEC_ONLY = "fec"
    SW_ARQ = "arq"
    HARQ_T1 = "harq1"
    HARQ_T2 = "harq2"


@dataclass(frozen=True)
class ProtocolConfig:
    """Error-control strategy and its parameters.

    Attributes
    ----------
    strategy : Strategy
    code : CodeSpec
        Correcting code (``none`` for ARQ or uncoded FEC).
    detector : CodeSpec
        ``crc4`` or ``none``.
    max_retransmissions : int
        Retries after the first attempt before the sender gives up.
    timeout : float or None
        Seconds the sender waits for feedback; ``None`` means twice the
        attempt's airtime plus `processing_time`.
    round_trip : float or None
        Feedback delay after a frame; ``None`` means the control frame's
        airtime.
    ack_error_model : {"ideal", "same_channel"}
        Whether control frames cross the reverse channel or always arrive.
    ack_bits : int
        Control frame length including its CRC-4.
    """

    strategy: Strategy = Strategy.SW_ARQ
    code: CodeSpec = field(default_factory=CodeSpec.none)
    detector: CodeSpec = field(default_factory=CodeSpec.crc4)
    max_retransmissions: int = 16
    timeout: float | None = None
    round_trip: float | None = None
    ack_error_model: str = "same_channel"
    ack_bits: int = ACK_BITS
    processing_time: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if self.detector.kind not in (CodeKind.NONE, CodeKind.CRC4):
            raise ValueError(f"detector must be crc4 or none, got {self.detector.kind.value}")
        if self.code.kind is CodeKind.CRC4:
            raise ValueError("crc4 is a detector; pass it as `detector`")
        s = self.strategy
        if s in (Strategy.SW_ARQ, Strategy.HARQ_T1, Strategy.HARQ_T2) and not self.detector.detects:
            raise ValueError(f"{s.value} requires an error-detection code (detector = crc4)")
        if s in (Strategy.HARQ_T1, Strategy.HARQ_T2) and not self.code.corrects:
            raise ValueError(f"{s.value} requires a correcting code (hamming74 or rs)")
        if s is Strategy.SW_ARQ and self.code.kind is not CodeKind.NONE:
            raise ValueError("sw-arq sends data + CRC only; use harq1 for coded frames")
        if not isinstance(self.max_retransmissions, int) or self.max_retransmissions < 0:
            raise ValueError("max_retransmissions must be an integer >= 0")
        for name in ("timeout", "round_trip"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValueError(f"{name} must be > 0")
        if self.ack_error_model not in ACK_ERROR_MODELS:
            raise ValueError(f"ack_error_model must be one of {ACK_ERROR_MODELS}")
        if self.ack_bits < 7:
            raise ValueError("ack_bits must be >= 7")
        if not self.processing_time >= 0:
            raise ValueError("processing_time must be >= 0")

    @property
    def max_attempts(self) -> int:
        return 1 if self.strategy is Strategy.FEC_ONLY else self.max_retransmissions + 1

    @property
    def has_feedback(self) -> bool:
        return self.strategy is not Strategy.FEC_ONLY
