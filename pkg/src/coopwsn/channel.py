"""
Single wireless link: distance-dependent average SNR, Rayleigh block fading
and noisy transport of constellation symbols.

Symbols are complex baseband values normalised to unit average energy, so
the instantaneous SNR of a frame is the symbol-energy-to-noise ratio.  The
received signal of one frame is modelled as ``y = sqrt(snr) * x + n`` with
``n ~ CN(0, 1)``; :func:`transmit_symbols` returns either this raw
observation or the equalised one, ``y / sqrt(snr)``.

Besides the physical models (``rayleigh`` and ``awgn``) a :class:`ChannelModel`
can describe hard error injection processes (i.i.d. bit flips, symbol
errors, whole-frame errors) which are used to sweep BER directly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "LinkSpec",
    "FadedSnrSample",
    "ChannelModel",
    "CHANNEL_KINDS",
    "average_snr",
    "snr_density",
    "sample_snr",
    "draw_snr",
    "transmit_symbols",
    "flip_bits",
    "inject_symbol_errors",
    "inject_frame_errors",
]

CHANNEL_KINDS = ("rayleigh", "awgn", "bit_flip", "symbol_error", "frame_error")
SOFT_KINDS = ("rayleigh", "awgn")


@dataclass(frozen=True)
class LinkSpec:
    """Geometry and radio parameters of one transmitter to receiver link.

    Attributes
    ----------
    distance : float
        Link length in metres.
    path_loss_exponent : float
        Exponent of the ``distance**-alpha`` power law.
    tx_power : float
        Transmit power in watts.
    noise_power : float
        Noise power in watts.
    gain : float
        Unit-gain constant multiplying the received power (default 1).
    """

    distance: float
    path_loss_exponent: float = 2.0
    tx_power: float = 1.0
    noise_power: float = 1.0
    gain: float = 1.0

    def __post_init__(self):
        if not self.distance > 0:
            raise ValueError(f"distance must be > 0, got {self.distance}")
        if not self.path_loss_exponent >= 0:
            raise ValueError(f"path_loss_exponent must be >= 0, got {self.path_loss_exponent}")
        if not self.tx_power >= 0:
            raise ValueError(f"tx_power must be >= 0, got {self.tx_power}")
        if not self.noise_power > 0:
            raise ValueError(f"noise_power must be > 0, got {self.noise_power}")
        if not self.gain > 0:
            raise ValueError(f"gain must be > 0, got {self.gain}")

    def with_tx_power(self, tx_power: float) -> "LinkSpec":
        return replace(self, tx_power=tx_power)

    def scaled(self, factor: float) -> "LinkSpec":
        """Same link with the distance multiplied by `factor`."""
        return replace(self, distance=self.distance * factor)


@dataclass(frozen=True)
class FadedSnrSample:
    """Instantaneous received SNR of one frame (linear power ratio)."""

    instantaneous_snr: float

    def __post_init__(self):
        if not self.instantaneous_snr >= 0:
            raise ValueError(f"instantaneous SNR must be >= 0, got {self.instantaneous_snr}")

    def __float__(self):
        return float(self.instantaneous_snr)


@dataclass(frozen=True)
class ChannelModel:
    """Which error process every link of a scenario follows.

    ``rayleigh`` draws one exponential SNR per frame (block fading) around
    the link's average SNR; ``awgn`` uses the average SNR as is.  The three
    injection kinds ignore SNR and corrupt hard bits at ``error_rate``:
    per bit (``bit_flip``), per modulation symbol (``symbol_error``) or per
    frame, by flipping one random bit (``frame_error``).
    """

    kind: str = "rayleigh"
    error_rate: float = 0.0

    def __post_init__(self):
        if self.kind not in CHANNEL_KINDS:
            raise ValueError(f"unknown channel kind {self.kind!r}; expected one of {CHANNEL_KINDS}")
        if not 0.0 <= self.error_rate <= 1.0:
            raise ValueError(f"error_rate must be in [0, 1], got {self.error_rate}")

    @property
    def soft(self) -> bool:
        return self.kind in SOFT_KINDS


def average_snr(link: LinkSpec) -> float:
    """Average received SNR of a link, ``gain * P_t * d**-alpha / N_0``.

    >>> average_snr(LinkSpec(distance=2.0, path_loss_exponent=2.0))
    0.25
    """
    if not link.distance > 0:
        raise ValueError("distance must be > 0")
    if not link.noise_power > 0:
        raise ValueError("noise_power must be > 0")
    return link.gain * link.tx_power * link.distance ** (-link.path_loss_exponent) / link.noise_power


def snr_density(gamma, sigma):
    """Exponential density of the instantaneous SNR, ``exp(-gamma/sigma)/sigma``.

    Vectorised over `gamma` (and `sigma`, by broadcasting).
    """
    gamma = np.asarray(gamma, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma <= 0):
        raise ValueError("sigma must be > 0")
    if np.any(gamma < 0):
        raise ValueError("gamma must be >= 0")
    out = np.exp(-gamma / sigma) / sigma
    return float(out) if out.ndim == 0 else out


def draw_snr(sigma, rng: np.random.Generator, size=None) -> np.ndarray:
    """Array of exponential SNR draws with mean `sigma`."""
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma <= 0):
        raise ValueError("sigma must be > 0")
    return rng.exponential(1.0, size=size if size is not None else sigma.shape) * sigma


def sample_snr(sigma: float, rng: np.random.Generator) -> FadedSnrSample:
    """One Rayleigh-faded SNR sample (exponential with mean `sigma`)."""
    if not sigma > 0:
        raise ValueError("sigma must be > 0")
    return FadedSnrSample(float(rng.exponential(1.0) * sigma))


def _snr_array(snr, ndim):
    if isinstance(snr, FadedSnrSample):
        snr = snr.instantaneous_snr
    gamma = np.asarray(snr, dtype=float)
    if np.any(gamma < 0) or np.any(np.isnan(gamma)):
        raise ValueError("SNR must be >= 0")
    # one SNR per frame (leading axes), constant over the symbol axis
    return gamma.reshape(gamma.shape + (1,) * (ndim - gamma.ndim))


def transmit_symbols(symbols, snr, rng: np.random.Generator, equalize: bool = True) -> np.ndarray:
    """Send symbols through one block-faded link.

    Parameters
    ----------
    symbols : array_like of complex
        Shape ``(..., n_symbols)``; the last axis is one frame.
    snr : float, FadedSnrSample or array_like
        Instantaneous SNR, one value per frame (shape of the leading axes).
        ``inf`` gives a noiseless channel.
    rng : numpy.random.Generator
        Source of the noise samples.
    equalize : bool
        Return ``y / sqrt(snr)`` (default) instead of ``y = sqrt(snr) x + n``.
        At ``snr = 0`` there is no signal to equalise and the pure noise is
        returned in both modes.

    Returns
    -------
    numpy.ndarray
        Complex received samples, same shape as `symbols`.
    """
    x = np.asarray(symbols, dtype=complex)
    if x.size == 0:
        raise ValueError("cannot transmit an empty symbol sequence")
    gamma = _snr_array(snr, x.ndim)
    noise = rng.standard_normal((2,) + x.shape)
    n = (noise[0] + 1j * noise[1]) * np.sqrt(0.5)
    with np.errstate(divide="ignore", invalid="ignore"):
        if equalize:
            y = np.where(gamma > 0, x + n / np.sqrt(gamma), n)
        else:
            y = np.sqrt(gamma) * x + n
    return y


def flip_bits(bits, ber: float, rng: np.random.Generator) -> np.ndarray:
    """Flip every bit independently with probability `ber`."""
    bits = np.asarray(bits, dtype=np.uint8)
    mask = rng.random(bits.shape) < ber
    return bits ^ mask.astype(np.uint8)


def inject_symbol_errors(bits, bits_per_symbol: int, ser: float, rng: np.random.Generator) -> np.ndarray:
    """Replace each ``bits_per_symbol`` group, with probability `ser`, by a
    uniformly chosen different symbol.  The bit count must divide evenly."""
    bits = np.asarray(bits, dtype=np.uint8)
    b = int(bits_per_symbol)
    if bits.shape[-1] % b:
        raise ValueError("bit count is not a multiple of bits_per_symbol")
    groups = bits.reshape(bits.shape[:-1] + (-1, b))
    hit = rng.random(groups.shape[:-1]) < ser
    pattern = rng.integers(1, 2**b, size=groups.shape[:-1])
    shifts = np.arange(b - 1, -1, -1)
    xor = ((pattern[..., None] >> shifts) & 1).astype(np.uint8) * hit[..., None]
    return (groups ^ xor).reshape(bits.shape)


def inject_frame_errors(bits, fer: float, rng: np.random.Generator) -> np.ndarray:
    """With probability `fer` per frame (last axis), flip one random bit."""
    bits = np.array(bits, dtype=np.uint8)
    frames = bits.reshape(-1, bits.shape[-1])
    hit = rng.random(frames.shape[0]) < fer
    pos = rng.integers(0, frames.shape[1], size=frames.shape[0])
    rows = np.nonzero(hit)[0]
    frames[rows, pos[rows]] ^= 1
    return frames.reshape(bits.shape)
