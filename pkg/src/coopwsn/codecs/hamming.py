"""Systematic Hamming(7,4) with syndrome decoding.

Codeword layout is ``d1 d2 d3 d4 p1 p2 p3`` with
``p1 = d1+d2+d4``, ``p2 = d1+d3+d4``, ``p3 = d2+d3+d4`` (mod 2).
"""

from __future__ import annotations

import numpy as np

from .status import DecodeStatus

__all__ = [
    "GENERATOR",
    "PARITY_CHECK",
    "hamming74_encode",
    "hamming74_decode",
    "hamming74_encode_blocks",
    "hamming74_decode_blocks",
]

_P = np.array(
    [
        [1, 1, 0],
        [1, 0, 1],
        [0, 1, 1],
        [1, 1, 1],
    ],
    dtype=np.int64,
)
GENERATOR = np.hstack([np.eye(4, dtype=np.int64), _P])
PARITY_CHECK = np.hstack([_P.T, np.eye(3, dtype=np.int64)])

# syndrome (as integer, first row = MSB) -> position of the single bit error
_SYNDROME_POSITION = np.full(8, -1, dtype=np.int64)
for _pos in range(7):
    _col = PARITY_CHECK[:, _pos]
    _SYNDROME_POSITION[_col[0] * 4 + _col[1] * 2 + _col[2]] = _pos


def _bits(values, width):
    return ((values[:, None] >> np.arange(width - 1, -1, -1)) & 1).astype(np.uint8)


_ENCODE = ((_bits(np.arange(16), 4).astype(np.int64) @ GENERATOR) & 1).astype(np.uint8)
_ALL7 = _bits(np.arange(128), 7).astype(np.int64)
_S = (_ALL7 @ PARITY_CHECK.T) & 1
_SYN = _S[:, 0] * 4 + _S[:, 1] * 2 + _S[:, 2]
_FIXED = _ALL7.copy()
_FIXED[np.nonzero(_SYN)[0], _SYNDROME_POSITION[_SYN[_SYN != 0]]] ^= 1
# received 7-bit word -> corrected data bits and whether a bit was flipped
_DECODE = _FIXED[:, :4].astype(np.uint8)
_CORRECTED = _SYN != 0


def _index(bits, width):
    # the block read as an unsigned integer, first bit most significant
    packed = np.packbits(np.asarray(bits, dtype=np.uint8) & 1, axis=-1)[..., 0]
    return packed >> (8 - width)


def hamming74_encode_blocks(data) -> np.ndarray:
    """Encode ``(..., 4)`` data blocks into ``(..., 7)`` codewords."""
    data = np.asarray(data)
    if data.shape[-1] != 4:
        raise ValueError(f"Hamming(7,4) blocks carry 4 data bits, got {data.shape[-1]}")
    return _ENCODE.take(_index(data, 4), axis=0)


def hamming74_decode_blocks(code):
    """Syndrome-decode ``(..., 7)`` blocks.

    Returns
    -------
    data : ndarray of uint8, shape ``(..., 4)``
    corrected : ndarray of bool, shape ``(...)``
        True where a (presumed single) bit error was flipped.
    """
    code = np.asarray(code)
    if code.shape[-1] != 7:
        raise ValueError(f"Hamming(7,4) codewords have 7 bits, got {code.shape[-1]}")
    idx = _index(code, 7)
    # take() copies even for a single block, so callers cannot write into the tables
    return _DECODE.take(idx, axis=0), _CORRECTED.take(idx)


def hamming74_encode(data) -> np.ndarray:
    """Encode exactly 4 data bits."""
    data = np.asarray(data)
    if data.shape != (4,):
        raise ValueError(f"expected 4 data bits, got shape {data.shape}")
    return hamming74_encode_blocks(data)


def hamming74_decode(code):
    """Decode exactly 7 code bits into ``(data, DecodeStatus)``."""
    code = np.asarray(code)
    if code.shape != (7,):
        raise ValueError(f"expected 7 code bits, got shape {code.shape}")
    data, corrected = hamming74_decode_blocks(code)
    return data, DecodeStatus.CORRECTED if corrected else DecodeStatus.CLEAN
