"""CRC-4 error detection.

Generator ``x^4 + x + 1`` (CRC-4-ITU), zero initial remainder, no bit
reflection and no final XOR.  Bits are processed MSB (first array element)
first; the four check bits are the remainder of ``M(x) * x^4``, highest
degree first.  All functions act on the last axis and broadcast over any
leading batch axes.
"""

from __future__ import annotations

import numpy as np

__all__ = ["CRC4_POLY", "CRC4_BITS", "crc_remainder", "crc4_append", "crc4_check"]

CRC4_POLY = 0b10011
CRC4_BITS = 4


def _byte_tables(poly: int, degree: int):
    """``T[r] = r x^8 mod poly`` for every remainder and ``M[b] = b mod poly`` for every byte."""
    mask = (1 << degree) - 1
    low = poly & mask

    def step(reg, bit):
        carry = (reg >> (degree - 1)) & 1
        reg = ((reg << 1) & mask) | bit
        return reg ^ (low if carry else 0)

    def feed(reg, byte):
        for k in range(7, -1, -1):
            reg = step(reg, (byte >> k) & 1)
        return reg

    shift = np.array([feed(r, 0) for r in range(1 << degree)], dtype=np.int64)
    byte = np.array([feed(0, b) for b in range(256)], dtype=np.int64)
    return shift, byte


_TABLES = {}


def crc_remainder(bits, poly: int = CRC4_POLY, degree: int = CRC4_BITS) -> np.ndarray:
    """Remainder of the bit polynomial modulo `poly`, as an integer array.

    The bit sequence is read as a polynomial with its first element the
    highest-degree coefficient.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    if (poly, degree) not in _TABLES:
        _TABLES[poly, degree] = _byte_tables(poly, degree)
    shift, byte = _TABLES[poly, degree]
    # leading zeros leave the polynomial unchanged, so pad to whole bytes in front
    pad = -bits.shape[-1] % 8
    if pad:
        bits = np.concatenate([np.zeros(bits.shape[:-1] + (pad,), np.uint8), bits], axis=-1)
    packed = np.packbits(bits, axis=-1)
    reg = np.zeros(bits.shape[:-1], dtype=np.int64)
    for j in range(packed.shape[-1]):
        reg = shift[reg] ^ byte[packed[..., j]]
    return reg


def _to_bits(values: np.ndarray, width: int) -> np.ndarray:
    shifts = np.arange(width - 1, -1, -1)
    return ((values[..., None] >> shifts) & 1).astype(np.uint8)


def crc4_append(bits) -> np.ndarray:
    """Frame = payload followed by its 4 check bits."""
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.shape[-1] == 0:
        raise ValueError("cannot protect an empty payload")
    augmented = np.concatenate([bits, np.zeros(bits.shape[:-1] + (CRC4_BITS,), np.uint8)], axis=-1)
    rem = crc_remainder(augmented)
    return np.concatenate([bits, _to_bits(rem, CRC4_BITS)], axis=-1)


def crc4_check(frame):
    """True where the frame polynomial is divisible by the generator."""
    frame = np.asarray(frame, dtype=np.uint8)
    if frame.shape[-1] < CRC4_BITS + 1:
        raise ValueError(f"a CRC-4 frame needs at least {CRC4_BITS + 1} bits, got {frame.shape[-1]}")
    ok = crc_remainder(frame) == 0
    return bool(ok) if ok.ndim == 0 else ok
