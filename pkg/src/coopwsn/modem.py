"""
M-QAM bookkeeping: the closed-form average SER over Rayleigh fading, the
Gray-mapping BER approximation, and bit <-> symbol mapping.

Mapping is Gray-coded square QAM normalised to unit average symbol
energy.  Within each group of ``b`` bits the first ``b/2`` select the
in-phase level and the last ``b/2`` the quadrature level, MSB first.
``b = 1`` is BPSK on the real axis (bit 0 -> -1, bit 1 -> +1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "ModulationSpec",
    "ser_mqam",
    "ser_to_ber",
    "map_symbols",
    "demap_symbols",
    "symbol_errors",
]


@dataclass(frozen=True)
class ModulationSpec:
    """Constellation size ``M`` (a power of two) and ``b = log2(M)``."""

    constellation_size: int = 4

    def __post_init__(self):
        m = self.constellation_size
        if not isinstance(m, (int, np.integer)) or m < 2 or m & (m - 1):
            raise ValueError(f"constellation size must be a power of two >= 2, got {m!r}")

    @property
    def bits_per_symbol(self) -> int:
        return int(self.constellation_size).bit_length() - 1

    @property
    def square(self) -> bool:
        return self.bits_per_symbol % 2 == 0

    @classmethod
    def from_bits(cls, bits_per_symbol: int) -> "ModulationSpec":
        return cls(2 ** int(bits_per_symbol))


def _bits_of(mod) -> int:
    if isinstance(mod, ModulationSpec):
        return mod.bits_per_symbol
    return int(mod)


def ser_mqam(sigma, mod):
    """Approximate average SER of square M-QAM over a Rayleigh link.

    ``2 (1 - 2**(-b/2)) (1 - sqrt(3 sigma / (2 (2**b - 1) + 3 sigma)))``

    Parameters
    ----------
    sigma : float or array_like
        Average SNR (linear), ``>= 0``.  ``inf`` is accepted.
    mod : ModulationSpec or int
        Modulation, or directly the (even) bits per symbol.
    """
    b = _bits_of(mod)
    if b % 2:
        raise ValueError(f"closed-form SER needs square QAM (even bits per symbol), got b={b}")
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma < 0) or np.any(np.isnan(sigma)):
        raise ValueError("sigma must be >= 0")
    k = 2.0 * (2.0**b - 1.0)
    with np.errstate(invalid="ignore"):
        ratio = np.where(np.isinf(sigma), 1.0, 3.0 * sigma / (k + 3.0 * sigma))
    ser = 2.0 * (1.0 - 2.0 ** (-b / 2)) * (1.0 - np.sqrt(ratio))
    ser = np.clip(ser, 0.0, 1.0)
    return float(ser) if ser.ndim == 0 else ser


def ser_to_ber(ser, mod):
    """Gray-mapping approximation ``BER = SER / b``, clamped to [0, 1]."""
    b = _bits_of(mod)
    ber = np.clip(np.asarray(ser, dtype=float) / b, 0.0, 1.0)
    return float(ber) if ber.ndim == 0 else ber


@lru_cache(maxsize=None)
def _axis_tables(bits_per_axis: int):
    levels = 2**bits_per_axis
    k = np.arange(levels)
    gray = k ^ (k >> 1)
    level_of_gray = np.empty(levels, dtype=np.int64)
    level_of_gray[gray] = k
    amplitude = 2.0 * k - (levels - 1)
    return gray, level_of_gray, amplitude


def _scale(b: int) -> float:
    if b == 1:
        return 1.0
    return 1.0 / np.sqrt(2.0 * (2**b - 1) / 3.0)


def _check_mod(b: int):
    if b != 1 and b % 2:
        raise ValueError(f"only BPSK and square QAM are supported, got b={b}")


def _pack(groups: np.ndarray) -> np.ndarray:
    """(..., h) bit groups -> integers, MSB first."""
    h = groups.shape[-1]
    weights = 1 << np.arange(h - 1, -1, -1)
    return groups.astype(np.int64) @ weights


def _unpack(values: np.ndarray, h: int) -> np.ndarray:
    shifts = np.arange(h - 1, -1, -1)
    return ((values[..., None] >> shifts) & 1).astype(np.uint8)


def map_symbols(bits, mod) -> np.ndarray:
    """Map bits (last axis) to Gray-coded unit-energy constellation points."""
    b = _bits_of(mod)
    _check_mod(b)
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.shape[-1] % b:
        raise ValueError(f"bit count {bits.shape[-1]} is not divisible by bits per symbol {b}")
    groups = bits.reshape(bits.shape[:-1] + (-1, b))
    if b == 1:
        return (2.0 * groups[..., 0] - 1.0).astype(complex)
    h = b // 2
    _, level_of_gray, amplitude = _axis_tables(h)
    i = amplitude[level_of_gray[_pack(groups[..., :h])]]
    q = amplitude[level_of_gray[_pack(groups[..., h:])]]
    return (i + 1j * q) * _scale(b)


def demap_symbols(symbols, mod) -> np.ndarray:
    """Minimum-distance hard decision back to bits."""
    b = _bits_of(mod)
    _check_mod(b)
    y = np.asarray(symbols, dtype=complex)
    if b == 1:
        return (y.real > 0).astype(np.uint8)
    h = b // 2
    levels = 2**h
    gray, _, _ = _axis_tables(h)
    y = y / _scale(b)

    def axis(v):
        k = np.clip(np.rint((v + (levels - 1)) / 2.0), 0, levels - 1).astype(np.int64)
        return _unpack(gray[k], h)

    out = np.concatenate([axis(y.real), axis(y.imag)], axis=-1)
    return out.reshape(y.shape[:-1] + (y.shape[-1] * b,))


def symbol_errors(sent_bits, received_bits, bits_per_symbol: int) -> np.ndarray:
    """Per-frame count of ``bits_per_symbol`` groups that differ.

    A trailing partial group is compared as a group of its own.
    """
    a = np.asarray(sent_bits, dtype=np.uint8)
    r = np.asarray(received_bits, dtype=np.uint8)
    diff = a != r
    n = diff.shape[-1]
    b = int(bits_per_symbol)
    pad = (-n) % b
    if pad:
        diff = np.concatenate([diff, np.zeros(diff.shape[:-1] + (pad,), dtype=bool)], axis=-1)
    return diff.reshape(diff.shape[:-1] + (-1, b)).any(axis=-1).sum(axis=-1)
