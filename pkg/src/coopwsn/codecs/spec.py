"""Code descriptors and bit-level block adapters used by the protocols."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from enum import Enum
from fractions import Fraction
from functools import cached_property

import numpy as np

from .crc import CRC4_BITS
from .hamming import hamming74_decode_blocks, hamming74_encode_blocks
from .reed_solomon import ReedSolomon

__all__ = ["CodeKind", "CodeSpec", "Codeword", "BlockCodec", "block_codec"]


class CodeKind(str, Enum):
    NONE = "none"
    CRC4 = "crc4"
    HAMMING74 = "hamming74"
    REED_SOLOMON = "rs"


@dataclass(frozen=True)
class CodeSpec:
    """Which error-control code is in force.

    ``rs_symbol_bits``, ``rs_n`` and ``rs_k`` are only meaningful for
    Reed-Solomon; RS(N, K) has N symbols in total, K of them data, each
    ``m = rs_symbol_bits`` bits wide.
    """

    kind: CodeKind = CodeKind.NONE
    rs_symbol_bits: int | None = None
    rs_n: int | None = None
    rs_k: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", CodeKind(self.kind))
        if self.kind is CodeKind.REED_SOLOMON:
            n, k = self.rs_n, self.rs_k
            if n is None or k is None:
                raise ValueError("Reed-Solomon needs rs_n and rs_k")
            m = int(n + 1).bit_length() - 1
            if (1 << m) - 1 != n or m < 2:
                raise ValueError(f"RS length must be 2^m - 1, got N={n}")
            if self.rs_symbol_bits is None:
                object.__setattr__(self, "rs_symbol_bits", m)
            elif self.rs_symbol_bits != m:
                raise ValueError(f"N={n} implies m={m}, got rs_symbol_bits={self.rs_symbol_bits}")
            if not 1 <= k < n:
                raise ValueError(f"need 1 <= K < N, got K={k}, N={n}")
            if (n - k) // 2 < 1:
                raise ValueError(f"RS({n},{k}) corrects no symbol errors (t = 0)")
        elif any(v is not None for v in (self.rs_symbol_bits, self.rs_n, self.rs_k)):
            raise ValueError(f"RS parameters given for a {self.kind.value} code")

    @classmethod
    def none(cls):
        return cls(CodeKind.NONE)

    @classmethod
    def crc4(cls):
        return cls(CodeKind.CRC4)

    @classmethod
    def hamming74(cls):
        return cls(CodeKind.HAMMING74)

    @classmethod
    def rs(cls, n: int, k: int):
        return cls(CodeKind.REED_SOLOMON, rs_n=n, rs_k=k)

    @property
    def t(self) -> int:
        if self.kind is not CodeKind.REED_SOLOMON:
            raise AttributeError("t is defined for Reed-Solomon codes only")
        return (self.rs_n - self.rs_k) // 2

    @property
    def code_rate(self) -> Fraction:
        """Information bits per coded bit.  CRC overhead depends on the
        frame length, so detection-only codes report rate 1."""
        if self.kind is CodeKind.HAMMING74:
            return Fraction(4, 7)
        if self.kind is CodeKind.REED_SOLOMON:
            return Fraction(self.rs_k, self.rs_n)
        return Fraction(1)

    @property
    def corrects(self) -> bool:
        return self.kind in (CodeKind.HAMMING74, CodeKind.REED_SOLOMON)

    @property
    def detects(self) -> bool:
        return self.kind is CodeKind.CRC4

    @property
    def check_bits(self) -> int:
        return CRC4_BITS if self.kind is CodeKind.CRC4 else 0

    def reed_solomon(self) -> ReedSolomon:
        if self.kind is not CodeKind.REED_SOLOMON:
            raise ValueError("not a Reed-Solomon code")
        return _rs_cache(self.rs_n, self.rs_k)

    def label(self) -> str:
        if self.kind is CodeKind.REED_SOLOMON:
            return f"rs {self.rs_n} {self.rs_k}"
        return self.kind.value

    @classmethod
    def parse(cls, text: str) -> "CodeSpec":
        """Inverse of :meth:`label`: ``none``, ``crc4``, ``hamming74`` or ``rs N K``."""
        parts = str(text).split()
        if not parts:
            raise ValueError("empty code specification")
        head = parts[0].lower()
        if head == "rs":
            if len(parts) != 3:
                raise ValueError(f"expected 'rs N K', got {text!r}")
            try:
                n, k = int(parts[1]), int(parts[2])
            except ValueError:
                raise ValueError(f"expected integer N and K in {text!r}") from None
            return cls.rs(n, k)
        factories = {"none": cls.none, "crc4": cls.crc4, "hamming74": cls.hamming74}
        if head not in factories or len(parts) != 1:
            raise ValueError(f"unknown code {text!r}; expected none, crc4, hamming74 or 'rs N K'")
        return factories[head]()


_RS_CACHE: dict = {}


def _rs_cache(n, k):
    key = (n, k)
    if key not in _RS_CACHE:
        _RS_CACHE[key] = ReedSolomon(n, k)
    return _RS_CACHE[key]


@dataclass(frozen=True)
class Codeword:
    """A systematic codeword split into its payload and parity parts."""

    payload_bits: np.ndarray
    parity_bits: np.ndarray
    symbol_width: int = 1

    def __post_init__(self):
        for name in ("payload_bits", "parity_bits"):
            arr = np.asarray(getattr(self, name), dtype=np.uint8)
            if arr.ndim != 1:
                raise ValueError(f"{name} must be one-dimensional")
            object.__setattr__(self, name, arr)
        w = self.symbol_width
        if w < 1 or len(self.payload_bits) % w or len(self.parity_bits) % w:
            raise ValueError("part lengths must be multiples of the symbol width")

    @property
    def bits(self) -> np.ndarray:
        return np.concatenate([self.payload_bits, self.parity_bits])


class BlockCodec:
    """Bit-level view of a systematic block code.

    A frame of ``nblocks * k_bits`` information bits is cut into blocks; every
    coded block is its ``k_bits`` data followed by ``n_bits - k_bits`` parity
    bits.  Arrays carry any leading batch axes.
    """

    def __init__(self, spec: CodeSpec, k_bits: int, n_bits: int, symbol_width: int = 1):
        self.spec = spec
        self.k_bits = k_bits
        self.n_bits = n_bits
        self.symbol_width = symbol_width

    @property
    def parity_bits(self) -> int:
        return self.n_bits - self.k_bits

    def _blocks(self, bits, width):
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.shape[-1] % width:
            raise ValueError(f"frame of {bits.shape[-1]} bits is not a whole number of {width}-bit blocks")
        return bits.reshape(bits.shape[:-1] + (-1, width))

    def encode(self, info) -> np.ndarray:
        blocks = self._blocks(info, self.k_bits)
        coded = self._encode_blocks(blocks)
        return coded.reshape(coded.shape[:-2] + (-1,))

    def decode(self, code):
        """Returns ``(info_bits, failed, corrected)`` with per-frame flags."""
        blocks = self._blocks(code, self.n_bits)
        info, failed, corrected = self._decode_blocks(blocks)
        return (
            info.reshape(info.shape[:-2] + (-1,)),
            failed.any(axis=-1),
            corrected.sum(axis=-1),
        )

    def split(self, code):
        """Coded frame -> (data bits, parity bits), each concatenated over blocks."""
        blocks = self._blocks(code, self.n_bits)
        data = blocks[..., : self.k_bits]
        par = blocks[..., self.k_bits :]
        return data.reshape(data.shape[:-2] + (-1,)), par.reshape(par.shape[:-2] + (-1,))

    def join(self, data, parity) -> np.ndarray:
        d = self._blocks(data, self.k_bits)
        p = self._blocks(parity, self.parity_bits)
        out = np.concatenate([d, p], axis=-1)
        return out.reshape(out.shape[:-2] + (-1,))

    def _encode_blocks(self, blocks):
        return blocks

    def _decode_blocks(self, blocks):
        shape = blocks.shape[:-1]
        return blocks, np.zeros(shape, bool), np.zeros(shape, np.int64)


class _Hamming(BlockCodec):
    def _encode_blocks(self, blocks):
        return hamming74_encode_blocks(blocks)

    def _decode_blocks(self, blocks):
        data, corrected = hamming74_decode_blocks(blocks)
        return data, np.zeros(corrected.shape, bool), corrected.astype(np.int64)


class _ReedSolomon(BlockCodec):
    def __init__(self, spec, guard=True):
        rs = spec.reed_solomon()
        super().__init__(spec, rs.k * rs.m, rs.n * rs.m, rs.m)
        self.rs = rs
        self.guard = guard
        self._shifts = np.arange(rs.m - 1, -1, -1)

    def _to_symbols(self, blocks):
        g = blocks.reshape(blocks.shape[:-1] + (-1, self.rs.m)).astype(np.int64)
        return g @ (1 << self._shifts)

    def _to_bits(self, symbols):
        bits = ((symbols[..., None] >> self._shifts) & 1).astype(np.uint8)
        return bits.reshape(bits.shape[:-2] + (-1,))

    def _encode_blocks(self, blocks):
        return self._to_bits(self.rs.encode(self._to_symbols(blocks)))

    def _decode_blocks(self, blocks):
        msgs, corrected, failed = self.rs.decode_batch(self._to_symbols(blocks), guard=self.guard)
        return self._to_bits(msgs), failed, corrected


def block_codec(spec: CodeSpec, guard: bool = True) -> BlockCodec:
    """Bit-level codec for a correcting (or null) code."""
    if spec.kind is CodeKind.HAMMING74:
        return _Hamming(spec, 4, 7)
    if spec.kind is CodeKind.REED_SOLOMON:
        return _ReedSolomon(spec, guard=guard)
    if spec.kind is CodeKind.NONE:
        return BlockCodec(spec, 1, 1)
    raise ValueError(f"{spec.kind.value} is a detection code, not a block corrector")
