"""
Frame formats of each strategy and the matching decode hooks.

Attempt kinds:

* ``0`` data + CRC (ARQ, and the first HARQ Type-2 attempt), or the whole
  codeword for FEC-only and HARQ Type-1;
* ``1`` the parity increment of HARQ Type-2, decoded together with the
  stored data of attempt 0;
* ``2`` the whole codeword, decoded afresh (HARQ Type-2 from its third
  attempt on).

Information bits (payload plus CRC) are zero-padded to a whole number of
code blocks; the padding is known to both ends and never transmitted.
"""

from __future__ import annotations

import numpy as np

from ..codecs import CRC4_BITS, CodeKind, block_codec, crc4_append, crc4_check
from .config import ProtocolConfig, Strategy

__all__ = ["FrameFormat", "ProtocolReceiver", "KIND_DATA", "KIND_PARITY", "KIND_FULL"]

KIND_DATA, KIND_PARITY, KIND_FULL = 0, 1, 2


class FrameFormat:
    """Bit layout of every attempt kind for one payload length."""

    def __init__(self, config: ProtocolConfig, payload_bits: int):
        if payload_bits < 1:
            raise ValueError("payload must carry at least one bit")
        self.config = config
        self.payload_bits = int(payload_bits)
        self.crc = config.detector.detects
        self.info_bits = self.payload_bits + (CRC4_BITS if self.crc else 0)
        self.codec = block_codec(config.code)
        k, n = self.codec.k_bits, self.codec.n_bits
        self.blocks = -(-self.info_bits // k)
        self.pad = self.blocks * k - self.info_bits
        self.coded_bits = self.blocks * n
        # positions of the padding inside the whole codeword (last block)
        last = (self.blocks - 1) * n
        pad_pos = np.arange(last + k - self.pad, last + k)
        self._keep = np.setdiff1d(np.arange(self.coded_bits), pad_pos)
        self.parity_bits = self.blocks * (n - k)

    # -- attempt structure --------------------------------------------------

    def kind_of(self, attempt):
        attempt = np.asarray(attempt)
        s = self.config.strategy
        if s is Strategy.HARQ_T2:
            return np.minimum(attempt, KIND_FULL)
        if s is Strategy.SW_ARQ:
            return np.zeros_like(attempt)
        return np.full_like(attempt, KIND_FULL)

    def length(self, kind: int) -> int:
        """On-air bits of an attempt kind."""
        if kind == KIND_DATA:
            return self.info_bits
        if kind == KIND_PARITY:
            return self.parity_bits
        return len(self._keep)

    # -- sender -------------------------------------------------------------

    def info(self, payloads):
        payloads = np.asarray(payloads, dtype=np.uint8)
        return crc4_append(payloads) if self.crc else payloads

    def _padded(self, info):
        if not self.pad:
            return info
        return np.concatenate([info, np.zeros((info.shape[0], self.pad), np.uint8)], axis=1)

    def codeword(self, info):
        """Whole on-air codeword (padding removed)."""
        return self.codec.encode(self._padded(info))[:, self._keep]

    def parity(self, info):
        return self.codec.split(self.codec.encode(self._padded(info)))[1]

    def frame(self, kind: int, info, codeword=None):
        if kind == KIND_DATA:
            return info
        if kind == KIND_PARITY:
            return self.parity(info)
        return self.codeword(info) if codeword is None else codeword

    # -- receiver helpers ---------------------------------------------------

    def _full(self, rx):
        full = np.zeros((rx.shape[0], self.coded_bits), np.uint8)
        full[:, self._keep] = rx
        return full

    def decode_codeword(self, rx):
        """Returns ``(ok, info_estimate)`` for whole received codewords."""
        info, failed, _ = self.codec.decode(self._full(rx))
        info = info[:, : self.info_bits]
        ok = ~failed
        if self.crc:
            ok &= np.asarray(crc4_check(info)).reshape(-1)
        return ok, info

    def check_info(self, info):
        if not self.crc:
            return np.ones(info.shape[0], dtype=bool)
        return np.asarray(crc4_check(info)).reshape(-1)


class ProtocolReceiver:
    """Decode hook for the destination ``"d"`` and relays ``"r1"``, ``"r2"``.

    Keeps, per node and session, the data part received in attempt 0 so a
    later parity increment can be decoded against it.  Call :meth:`reset`
    when a session moves on to a new payload.
    """

    def __init__(self, fmt: FrameFormat, n_sessions: int, kind: int = KIND_DATA):
        self.fmt = fmt
        self.kind = kind
        self._stored = {}
        self._has = {}
        self.n = n_sessions

    def _store(self, node):
        if node not in self._stored:
            self._stored[node] = np.zeros((self.n, self.fmt.info_bits), np.uint8)
            self._has[node] = np.zeros(self.n, dtype=bool)
        return self._stored[node], self._has[node]

    def reset(self, rows):
        for node in self._has:
            self._has[node][rows] = False

    def decode(self, node, rows, rx):
        fmt = self.fmt
        kind = self.kind
        lp = fmt.payload_bits
        if kind == KIND_DATA and fmt.config.strategy in (Strategy.SW_ARQ, Strategy.HARQ_T2):
            ok = fmt.check_info(rx)
            if fmt.config.strategy is Strategy.HARQ_T2:
                data, has = self._store(node)
                data[rows] = rx
                has[rows] = True
            return ok, rx, rx[:, :lp]
        if kind == KIND_PARITY:
            data, has = self._store(node)
            stored = data[rows]
            full = fmt.codec.join(fmt._padded(stored), rx)
            info, failed, _ = fmt.codec.decode(full)
            info = info[:, : fmt.info_bits]
            ok = ~failed & fmt.check_info(info) & has[rows]
            recon = fmt.parity(info)
            est = np.where(has[rows][:, None], info[:, :lp], 0).astype(np.uint8)
            return ok, recon, est
        ok, info = fmt.decode_codeword(rx)
        recon = fmt.codeword(info)
        return ok, recon, info[:, :lp]
