"""Data and control frames of the stop-and-wait family of protocols."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from ..codecs import CRC4_BITS, crc4_append, crc4_check

__all__ = ["FrameKind", "Frame", "ACK_BITS", "encode_control", "decode_control"]

ACK_BITS = 16


class FrameKind(IntEnum):
    DATA = 0
    ACK = 1
    NACK = 2


@dataclass(frozen=True)
class Frame:
    """One frame on the air.

    ``seq_num`` and ``nfe`` are one-bit counters (window of one);
    ``fec_increment_id`` tells a HARQ Type-2 receiver which part of the
    codeword the frame carries (0 data + check, 1 parity increment,
    2 whole codeword).
    """

    kind: FrameKind
    seq_num: int = 0
    nfe: int = 0
    payload: np.ndarray = np.zeros(0, dtype=np.uint8)
    check_bits: np.ndarray = np.zeros(0, dtype=np.uint8)
    fec_increment_id: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", FrameKind(self.kind))
        for name in ("seq_num", "nfe"):
            if getattr(self, name) not in (0, 1):
                raise ValueError(f"{name} is a one-bit counter, got {getattr(self, name)}")
        if self.kind is not FrameKind.DATA and len(self.check_bits) != CRC4_BITS:
            raise ValueError("ACK/NACK frames must carry CRC-4 check bits")

    @property
    def bits(self) -> np.ndarray:
        return np.concatenate([np.asarray(self.payload, np.uint8), np.asarray(self.check_bits, np.uint8)])


def encode_control(kind, nfe, n_bits: int = ACK_BITS) -> np.ndarray:
    """Control frames for a batch: 2 kind bits, 1 NFE bit, zero padding, CRC-4.

    `kind` and `nfe` are arrays (or scalars) of :class:`FrameKind` values and
    expected sequence numbers.
    """
    if n_bits < 3 + CRC4_BITS:
        raise ValueError(f"control frames need at least {3 + CRC4_BITS} bits")
    kind = np.atleast_1d(np.asarray(kind, dtype=np.int64))
    nfe = np.atleast_1d(np.asarray(nfe, dtype=np.int64))
    body = np.zeros((kind.size, n_bits - CRC4_BITS), dtype=np.uint8)
    body[:, 0] = (kind >> 1) & 1
    body[:, 1] = kind & 1
    body[:, 2] = nfe & 1
    return crc4_append(body)


def decode_control(bits):
    """Returns ``(valid, kind, nfe)`` arrays for received control frames."""
    bits = np.atleast_2d(np.asarray(bits, dtype=np.uint8))
    valid = np.asarray(crc4_check(bits)).reshape(-1)
    kind = bits[:, 0].astype(np.int64) * 2 + bits[:, 1]
    valid &= (kind == FrameKind.ACK) | (kind == FrameKind.NACK)
    return valid, kind, bits[:, 2].astype(np.int64)
