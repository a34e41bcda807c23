"""Error detection and correction codes: CRC-4, Hamming(7,4), Reed-Solomon."""

from .crc import CRC4_BITS, CRC4_POLY, crc4_append, crc4_check, crc_remainder
from .gf import GF2m, PRIMITIVE_POLYNOMIALS, field
from .hamming import (
    GENERATOR,
    PARITY_CHECK,
    hamming74_decode,
    hamming74_decode_blocks,
    hamming74_encode,
    hamming74_encode_blocks,
)
from .reed_solomon import ReedSolomon, rs_decode, rs_encode
from .spec import BlockCodec, CodeKind, CodeSpec, Codeword, block_codec
from .status import DecodeResult, DecodeStatus

__all__ = [
    "CRC4_BITS",
    "CRC4_POLY",
    "crc4_append",
    "crc4_check",
    "crc_remainder",
    "GF2m",
    "PRIMITIVE_POLYNOMIALS",
    "field",
    "GENERATOR",
    "PARITY_CHECK",
    "hamming74_encode",
    "hamming74_decode",
    "hamming74_encode_blocks",
    "hamming74_decode_blocks",
    "ReedSolomon",
    "rs_encode",
    "rs_decode",
    "BlockCodec",
    "CodeKind",
    "CodeSpec",
    "Codeword",
    "block_codec",
    "DecodeResult",
    "DecodeStatus",
]
