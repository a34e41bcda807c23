"""
Conformance test vectors.

File format: one case per line, ``#`` starts a comment, fields separated by
a tab::

    <kind>  <nbits>:<hex>  <nbits>:<hex>

The first field names the codec (``crc4``, ``hamming74`` or ``rs<N>_<K>``),
the second is the input bit string and the third the expected encoder
output.  A bit string of ``nbits`` bits is written as the hex digits of the
bits left-padded with zeros to a whole number of nibbles, first bit = most
significant.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .crc import crc4_append, crc4_check
from .hamming import hamming74_decode_blocks, hamming74_encode_blocks
from .spec import CodeSpec, block_codec

__all__ = [
    "TestVector",
    "bits_to_hex",
    "hex_to_bits",
    "parse_vectors",
    "format_vector",
    "load_vectors",
    "encode_for",
    "check_vector",
    "selftest",
]

_RS_KIND = re.compile(r"^rs(\d+)_(\d+)$")


@dataclass(frozen=True)
class TestVector:
    kind: str
    input_bits: np.ndarray
    expected_bits: np.ndarray
    line: int = 0

    __test__ = False  # keep pytest from collecting this class


def bits_to_hex(bits) -> str:
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    n = bits.size
    if n == 0:
        return "0:"
    value = 0
    for bit in bits:
        value = (value << 1) | int(bit)
    return f"{n}:{value:0{(n + 3) // 4}x}"


def hex_to_bits(text: str) -> np.ndarray:
    count, sep, digits = text.partition(":")
    if not sep or not count.isdigit():
        raise ValueError(f"bit string must look like '<nbits>:<hex>', got {text!r}")
    n = int(count)
    if len(digits) != (n + 3) // 4:
        raise ValueError(f"{n} bits need {(n + 3) // 4} hex digits, got {len(digits)}")
    value = int(digits, 16) if digits else 0
    if value >> n:
        raise ValueError(f"hex value {digits!r} does not fit in {n} bits")
    return np.array([(value >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.uint8)


def parse_vectors(text: str) -> list[TestVector]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ValueError(f"line {lineno}: expected 3 tab-separated fields, got {len(fields)}")
        kind = fields[0].strip()
        try:
            out.append(TestVector(kind, hex_to_bits(fields[1].strip()), hex_to_bits(fields[2].strip()), lineno))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return out


def format_vector(kind: str, input_bits, expected_bits) -> str:
    return f"{kind}\t{bits_to_hex(input_bits)}\t{bits_to_hex(expected_bits)}"


def load_vectors() -> list[TestVector]:
    """Vectors shipped with the package."""
    text = resources.files(__package__).joinpath("data/vectors.txt").read_text(encoding="utf-8")
    return parse_vectors(text)


def _spec_for(kind: str) -> CodeSpec:
    if kind == "hamming74":
        return CodeSpec.hamming74()
    m = _RS_KIND.match(kind)
    if m:
        return CodeSpec.rs(int(m.group(1)), int(m.group(2)))
    raise ValueError(f"unknown vector kind {kind!r}")


def encode_for(kind: str, bits) -> np.ndarray:
    """Encoder output for a vector kind."""
    if kind == "crc4":
        return crc4_append(bits)
    return block_codec(_spec_for(kind)).encode(bits)


def check_vector(vec: TestVector) -> bool:
    """Encoder matches and the decoder (or checker) inverts it."""
    got = encode_for(vec.kind, vec.input_bits)
    if got.shape != vec.expected_bits.shape or np.any(got != vec.expected_bits):
        return False
    if vec.kind == "crc4":
        return bool(crc4_check(vec.expected_bits))
    info, failed, _ = block_codec(_spec_for(vec.kind)).decode(vec.expected_bits)
    return not failed and np.array_equal(info, vec.input_bits)


def selftest(seed: int = 0) -> list[tuple[str, bool]]:
    """Shipped vectors plus quick exhaustive codec checks.

    Returns a list of ``(check name, passed)``.
    """
    results = []
    vecs = load_vectors()
    results.append((f"vectors ({len(vecs)} cases)", all(check_vector(v) for v in vecs)))

    msgs = ((np.arange(16)[:, None] >> np.arange(3, -1, -1)) & 1).astype(np.uint8)
    code = hamming74_encode_blocks(msgs)
    flips = np.eye(7, dtype=np.uint8)
    corrupted = code[:, None, :] ^ flips[None, :, :]
    data, corrected = hamming74_decode_blocks(corrupted)
    results.append(("hamming74 single-error correction", bool(np.all(data == msgs[:, None, :]) and corrected.all())))

    ok = True
    for n in range(1, 17):
        payloads = ((np.arange(2**n)[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.uint8)
        frames = crc4_append(payloads)
        L = n + 4
        for length in range(1, 5):
            for start in range(L - length + 1):
                # bursts start and end with a flipped bit; interior is free
                inner = max(length - 2, 0)
                for mid in range(2**inner):
                    pat = np.zeros(L, dtype=np.uint8)
                    pat[start] = 1
                    pat[start + length - 1] = 1
                    for j in range(inner):
                        pat[start + 1 + j] = (mid >> j) & 1
                    if np.any(crc4_check(frames ^ pat)):
                        ok = False
    results.append(("crc4 burst detection (<= 4 bits, payload <= 16)", ok))

    rng = np.random.default_rng(seed)
    rs = CodeSpec.rs(7, 3).reed_solomon()
    msgs = rng.integers(0, 8, size=(200, 3))
    words = rs.encode(msgs)
    patterns = []
    for w in (1, 2):
        for pos in itertools.combinations(range(7), w):
            for vals in itertools.product(range(1, 8), repeat=w):
                e = np.zeros(7, dtype=np.int64)
                e[list(pos)] = vals
                patterns.append(e)
    patterns = np.array(patterns)
    rx = words[:, None, :] ^ patterns[None, :, :]
    dec, _, failed = rs.decode_batch(rx)
    ok = bool(not failed.any() and np.all(dec == msgs[:, None, :]))
    results.append((f"rs7_3 correction of every weight <= 2 pattern ({len(patterns)} x 200)", ok))
    return results
