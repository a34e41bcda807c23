"""Single-payload entry points and the stop-and-wait throughput formula."""

from __future__ import annotations

import numpy as np

from ..channel import ChannelModel
from ..cooperation import Topology
from ..energy import EnergyParams
from ..modem import ModulationSpec
from ..streams import LINK_IDS
from .config import ProtocolConfig, Strategy
from .engine import FaultPlan, run_sessions
from .log import TransmissionLog, logs_from_results

__all__ = [
    "run_protocol",
    "run_sw_arq",
    "run_harq_t1",
    "run_harq_t2",
    "run_fec_only",
    "sw_arq_throughput_analytic",
]


def _fault_plan(faults):
    """Accepts ``None``, a ``(rounds, 7)`` code array or a list of dicts."""
    if faults is None or isinstance(faults, FaultPlan):
        return faults
    if isinstance(faults, (list, tuple)) and (not faults or isinstance(faults[0], dict)):
        codes = np.zeros((1, max(len(faults), 1), len(LINK_IDS)), np.int8)
        for r, d in enumerate(faults):
            for name, code in d.items():
                codes[0, r, LINK_IDS[name]] = int(code)
        return FaultPlan(codes)
    codes = np.asarray(faults, np.int8)
    return FaultPlan(codes[None] if codes.ndim == 2 else codes)


def run_protocol(
    payload,
    topology: Topology,
    config: ProtocolConfig,
    rng=0,
    *,
    channel: ChannelModel = ChannelModel(),
    modulation: ModulationSpec = ModulationSpec(4),
    energy: EnergyParams | None = None,
    combining: str = "sum",
    faults=None,
    session: int = 0,
) -> TransmissionLog:
    """Send one payload under `config` and return its log.

    Parameters
    ----------
    payload : array_like of {0, 1}
    rng : int, StreamFactory or Generator
        Random streams; an int is a seed.
    faults : optional
        Forced link outcomes per attempt: a list with one ``{link: code}``
        dict per round, or an array of shape ``(rounds, 7)``.
    session : int
        Stream key of the session.
    """
    payload = np.asarray(payload, dtype=np.uint8)
    if payload.ndim != 1 or payload.size == 0:
        raise ValueError("payload must be a non-empty 1-D bit array")
    if np.any(payload > 1):
        raise ValueError("payload must contain only 0/1")
    res = run_sessions(
        topology,
        config,
        payload[None, None, :],
        rng,
        channel=channel,
        modulation=modulation,
        energy=energy,
        combining=combining,
        fault_plan=_fault_plan(faults),
        session_ids=np.array([session]),
        record=True,
    )
    return logs_from_results(res, session_ids=[session])[0]


def _runner(strategy):
    def run(payload, topology, config, rng=0, **kw):
        if config.strategy is not strategy:
            raise ValueError(f"config.strategy must be {strategy.value}, got {config.strategy.value}")
        return run_protocol(payload, topology, config, rng, **kw)

    run.__name__ = f"run_{strategy.name.lower()}"
    run.__doc__ = f"Send one payload with strategy ``{strategy.value}`` (see :func:`run_protocol`)."
    return run


run_sw_arq = _runner(Strategy.SW_ARQ)
run_harq_t1 = _runner(Strategy.HARQ_T1)
run_harq_t2 = _runner(Strategy.HARQ_T2)
run_fec_only = _runner(Strategy.FEC_ONLY)


def sw_arq_throughput_analytic(per, payload_bits, overhead_bits=0, round_trip=0.0, tx_time=None, bit_rate=1e6):
    """Expected stop-and-wait throughput in bits/s.

    ``payload_bits * (1 - per) / (tx_time + round_trip)``, where `tx_time`
    defaults to ``(payload_bits + overhead_bits) / bit_rate``.  `per` may be
    an array; ``per = 1`` gives zero.
    """
    per = np.asarray(per, dtype=float)
    if np.any((per < 0) | (per > 1)) or np.any(np.isnan(per)):
        raise ValueError("per must lie in [0, 1]")
    if payload_bits <= 0 or overhead_bits < 0 or round_trip < 0:
        raise ValueError("payload_bits must be > 0, overhead_bits and round_trip >= 0")
    if tx_time is None:
        if bit_rate <= 0:
            raise ValueError("bit_rate must be > 0")
        tx_time = (payload_bits + overhead_bits) / bit_rate
    cycle = tx_time + round_trip
    if cycle <= 0:
        raise ValueError("tx_time + round_trip must be > 0")
    out = payload_bits * (1.0 - per) / cycle
    return float(out) if out.ndim == 0 else out
