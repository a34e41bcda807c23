"""
Transmit power, per-packet energy and energy efficiency.

Two groups of models live here:

* the coding-gain link budget: minimum uncoded transmit power for a target
  BER, the power saved by an error-control code with a given coding gain,
  and the resulting energy saving per information bit;
* per-packet energy of direct transmission (DT), single-relay cooperation
  (SRC) and two-relay cooperation (MRC), whose event structure is
  direct success / total failure / relay phase, and the delivered bits
  per joule that follow from them.

All power terms are in watts, energies in joules, rates in bits/s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "BOLTZMANN",
    "MRC_ENERGY_MODELS",
    "EccLinkBudget",
    "EnergyParams",
    "PowerCase",
    "uncoded_tx_power",
    "coded_tx_power",
    "energy_saving_per_bit",
    "tx_energy_saving",
    "energy_dt",
    "power_dt",
    "power_src",
    "energy_src",
    "power_mrc",
    "energy_mrc",
    "mrc_relay_power",
    "efficiency",
]

BOLTZMANN = 1.380649e-23  # J/K
MRC_ENERGY_MODELS = ("eq22", "eq21-consistent")


@dataclass(frozen=True)
class EccLinkBudget:
    """Inputs of the minimum-transmit-power link budget.

    The ``required_snr_uncoded_db`` and ``ebno`` factors are multiplied
    together as in the original budget; when supplying one, set the other
    to its neutral value (0 dB, resp. 1) to avoid counting it twice.
    ``extra_factor`` is an otherwise unspecified dimensionless multiplier.
    """

    spectral_efficiency_uncoded: float = 1.0
    spectral_efficiency_coded: float = 1.0
    required_snr_uncoded_db: float = 0.0
    receiver_noise_figure_db: float = 0.0
    boltzmann: float = BOLTZMANN
    temperature: float = 290.0
    bandwidth_uncoded: float = 1e6
    bandwidth_coded: float = 1e6
    ebno: float = 1.0
    extra_factor: float = 1.0
    wavelength: float = 0.125
    distance: float = 100.0
    path_loss_exponent: float = 2.0
    bit_rate: float = 1e6
    ecc_gain_db: float = 0.0

    def __post_init__(self):
        positive = (
            "spectral_efficiency_uncoded",
            "spectral_efficiency_coded",
            "boltzmann",
            "temperature",
            "bandwidth_uncoded",
            "bandwidth_coded",
            "ebno",
            "extra_factor",
            "wavelength",
            "distance",
            "path_loss_exponent",
            "bit_rate",
        )
        for name in positive:
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be a finite positive number, got {v}")
        for name in ("required_snr_uncoded_db", "receiver_noise_figure_db"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if math.isnan(self.ecc_gain_db):
            raise ValueError("ecc_gain_db must not be NaN")

    @property
    def thermal_noise(self) -> float:
        """``k T B`` of the uncoded receiver, watts."""
        return self.boltzmann * self.temperature * self.bandwidth_uncoded


def uncoded_tx_power(budget: EccLinkBudget) -> float:
    """Minimum transmit power (W) for the uncoded system.

    >>> round(uncoded_tx_power(EccLinkBudget()) * 1e7, 3)
    4.046
    """
    if not budget.wavelength > 0:
        raise ValueError("wavelength must be > 0")
    if not budget.distance > 0:
        raise ValueError("distance must be > 0")
    snr_term = 10.0 ** (budget.required_snr_uncoded_db / 10.0 + budget.receiver_noise_figure_db / 10.0)
    free_space = (4.0 * math.pi / budget.wavelength) ** 2 * budget.distance**budget.path_loss_exponent
    return (
        budget.spectral_efficiency_uncoded
        * snr_term
        * budget.thermal_noise
        * budget.ebno
        * budget.extra_factor
        * free_space
    )


def coded_tx_power(p_tx_u, ecc_gain_db):
    """Transmit power once a code with the given coding gain (dB) is used."""
    p = np.asarray(p_tx_u, dtype=float)
    if np.any(p < 0):
        raise ValueError("uncoded power must be >= 0")
    out = p / 10.0 ** (np.asarray(ecc_gain_db, dtype=float) / 10.0)
    return float(out) if out.ndim == 0 else out


def energy_saving_per_bit(eb_tx_u, ecc_gain_db):
    """``Eb_u * (1 - 10**(-gain/10))``; an infinite gain saves all of ``Eb_u``."""
    gain = np.asarray(ecc_gain_db, dtype=float)
    out = np.asarray(eb_tx_u, dtype=float) * (1.0 - 10.0 ** (-gain / 10.0))
    return float(out) if out.ndim == 0 else out


def tx_energy_saving(budget: EccLinkBudget) -> float:
    """Transmit energy saved per information bit (J/bit) by the budget's code."""
    if not budget.bit_rate > 0:
        raise ValueError("bit_rate must be > 0")
    eb_u = uncoded_tx_power(budget) / budget.bit_rate
    return energy_saving_per_bit(eb_u, budget.ecc_gain_db)


@dataclass(frozen=True)
class EnergyParams:
    """Radio energy parameters of every node.

    Attributes
    ----------
    tx_power : float
        Radiated power ``P_t`` (W).
    amplifier_loss : float
        Power-amplifier loss factor ``beta``, strictly between 0 and 1.
    tx_circuit_power, rx_circuit_power : float
        Transmitter / receiver electronics (W).
    frame_bits : int
        Bits on the air per packet, ``L``.
    payload_bits : int
        Information bits per packet, ``L_p <= L``.
    bit_rate : float
        ``R_b`` in bits/s.
    bits_per_symbol : int
        Modulation bits per symbol; ``symbol_rate = bit_rate / b``.
    """

    tx_power: float = 1.0
    amplifier_loss: float = 0.5
    tx_circuit_power: float = 0.1
    rx_circuit_power: float = 0.1
    frame_bits: int = 1000
    payload_bits: int = 1000
    bit_rate: float = 1e6
    bits_per_symbol: int = 2

    def __post_init__(self):
        if not 0.0 < self.amplifier_loss < 1.0:
            raise ValueError(f"amplifier_loss (beta) must satisfy 0 < beta < 1, got {self.amplifier_loss}")
        for name in ("tx_power", "tx_circuit_power", "rx_circuit_power"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be >= 0")
        if not self.frame_bits > 0:
            raise ValueError("frame_bits must be > 0")
        if not 0 <= self.payload_bits <= self.frame_bits:
            raise ValueError(f"payload_bits must lie in [0, frame_bits], got {self.payload_bits}")
        if not self.bit_rate > 0:
            raise ValueError("bit_rate must be > 0")
        if not self.bits_per_symbol >= 1:
            raise ValueError("bits_per_symbol must be >= 1")

    @property
    def symbol_rate(self) -> float:
        return self.bit_rate / self.bits_per_symbol

    @property
    def airtime(self) -> float:
        """Seconds to send one ``L``-bit packet."""
        return self.frame_bits / self.bit_rate

    @property
    def pa_power(self) -> float:
        """Radiated power including amplifier loss, ``P_t (1 + beta)``."""
        return self.tx_power * (1.0 + self.amplifier_loss)

    def with_tx_power(self, tx_power: float) -> "EnergyParams":
        return replace(self, tx_power=tx_power)


@dataclass(frozen=True)
class PowerCase:
    """One event of a cooperative exchange: its total power (W) and probability."""

    name: str
    power: float
    weight: float


def _prob(name, p):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must be a probability in [0, 1], got {p}")
    return float(p)


def power_dt(params: EnergyParams) -> float:
    return params.pa_power + params.tx_circuit_power + params.rx_circuit_power


def energy_dt(params: EnergyParams) -> float:
    """Energy of one directly transmitted packet (J)."""
    return power_dt(params) * params.airtime


def _src_powers(params):
    pa, ct, cr = params.pa_power, params.tx_circuit_power, params.rx_circuit_power
    single = pa + ct + 2 * cr
    relay = 2 * pa + 2 * ct + 3 * cr
    return single, relay


def power_src(params: EnergyParams, per_sd: float, per_sr: float) -> tuple[PowerCase, PowerCase, PowerCase]:
    """The three SRC events with their powers and probabilities.

    Source and relay both listen to the broadcast; after a failed direct
    attempt a relay that decoded forwards the packet to the destination.
    """
    per_sd = _prob("per_sd", per_sd)
    per_sr = _prob("per_sr", per_sr)
    single, relay = _src_powers(params)
    return (
        PowerCase("direct_success", single, 1.0 - per_sd),
        PowerCase("total_failure", single, per_sd * per_sr),
        PowerCase("relay_phase", relay, per_sd * (1.0 - per_sr)),
    )


def energy_src(params: EnergyParams, per_sd: float, per_sr: float) -> float:
    """Expected energy of one SRC packet (J)."""
    per_sd = _prob("per_sd", per_sd)
    per_sr = _prob("per_sr", per_sr)
    single, relay = _src_powers(params)
    t = params.frame_bits / params.bit_rate
    return (
        (1.0 - per_sd) * single * t
        + per_sd * per_sr * single * t
        + per_sd * (1.0 - per_sr) * relay * t
    )


def power_mrc(params: EnergyParams, per_sd: float, per_sr1: float, per_sr2: float):
    """The three MRC events with their powers and probabilities.

    Case 3 is the relay phase in which both relays transmit,
    ``3 P_t (1 + beta) + 2 P_ct + 3 P_cr``.
    """
    per_sd = _prob("per_sd", per_sd)
    both = _prob("per_sr1", per_sr1) * _prob("per_sr2", per_sr2)
    pa, ct, cr = params.pa_power, params.tx_circuit_power, params.rx_circuit_power
    single = pa + ct + 3 * cr
    return (
        PowerCase("direct_success", single, 1.0 - per_sd),
        PowerCase("total_failure", single, per_sd * both),
        PowerCase("relay_phase", 3 * pa + 2 * ct + 3 * cr, per_sd * (1.0 - both)),
    )


def energy_mrc(
    params: EnergyParams,
    per_sd: float,
    per_sr1: float,
    per_sr2: float,
    model: str = "eq22",
) -> float:
    """Expected energy of one MRC packet (J).

    Parameters
    ----------
    model : {"eq22", "eq21-consistent"}
        The two published MRC forms differ only in the relay-phase
        coefficients: ``"eq22"`` (default) charges
        ``2 P_t (1 + beta) + 3 P_ct + 3 P_cr`` for it, while
        ``"eq21-consistent"`` uses the relay-phase power of
        :func:`power_mrc`, ``3 P_t (1 + beta) + 2 P_ct + 3 P_cr``.
    """
    if model not in MRC_ENERGY_MODELS:
        raise ValueError(f"mrc_energy_model must be one of {MRC_ENERGY_MODELS}, got {model!r}")
    cases = power_mrc(params, per_sd, per_sr1, per_sr2)
    pa, ct, cr = params.pa_power, params.tx_circuit_power, params.rx_circuit_power
    relay = 2 * pa + 3 * ct + 3 * cr if model == "eq22" else cases[2].power
    t = params.frame_bits / params.bit_rate
    return cases[0].weight * cases[0].power * t + cases[1].weight * cases[1].power * t + cases[2].weight * relay * t


def mrc_relay_power(params: EnergyParams, model: str = "eq22") -> float:
    """Relay-phase power charged by :func:`energy_mrc` under `model`."""
    if model not in MRC_ENERGY_MODELS:
        raise ValueError(f"mrc_energy_model must be one of {MRC_ENERGY_MODELS}, got {model!r}")
    pa, ct, cr = params.pa_power, params.tx_circuit_power, params.rx_circuit_power
    return 2 * pa + 3 * ct + 3 * cr if model == "eq22" else 3 * pa + 2 * ct + 3 * cr


def efficiency(payload_bits, per, energy):
    """Delivered information bits per joule, ``L_p (1 - per) / E``."""
    e = np.asarray(energy, dtype=float)
    p = np.asarray(per, dtype=float)
    if np.any(e <= 0):
        raise ValueError("energy must be > 0")
    if np.any((p < 0) | (p > 1)):
        raise ValueError("per must lie in [0, 1]")
    out = np.asarray(payload_bits, dtype=float) * (1.0 - p) / e
    return float(out) if out.ndim == 0 else out
