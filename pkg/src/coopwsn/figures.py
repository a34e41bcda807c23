"""
Preset scenario families behind the five reproduction figures.

``fig5``
    FEC-only BER over Rayleigh links versus S-D SNR: uncoded direct,
    RS(31,21) direct, RS(31,21) with one relay and with two relays.
``fig6`` / ``fig7``
    Stop-and-wait ARQ with CRC-4 over bit-flip links versus raw BER:
    throughput (fig6) and mean delay (fig7) for direct, one-relay and
    two-relay transmission, plus the stop-and-wait closed form.
``fig8`` / ``fig9``
    SER of HARQ Type-1 and Type-2 with Hamming(7,4) + CRC-4 over Rayleigh
    links versus S-D SNR, one relay (fig8) or two (fig9).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .channel import ChannelModel
from .codecs import CodeSpec
from .cooperation import Topology
from .error_control import ProtocolConfig, Strategy, sw_arq_throughput_analytic
from .modem import ModulationSpec
from .montecarlo import MetricsRow, Scenario, analytic_point, run_sweep

__all__ = [
    "FIGURES",
    "DEFAULT_SNR_DB",
    "DEFAULT_BER",
    "DEFAULT_TRIALS",
    "Curve",
    "figure_curves",
    "run_figure",
    "theoretical_throughput_rows",
]

FIGURES = ("fig5", "fig6", "fig7", "fig8", "fig9")
DEFAULT_SNR_DB = tuple(float(v) for v in np.linspace(0.0, 30.0, 31))
DEFAULT_BER = tuple(float(v) for v in np.logspace(-5, -1, 17))
DEFAULT_TRIALS = 100_000

# one RS(31,21) codeword: 21 five-bit symbols
FIG5_PAYLOAD = 105
ARQ_PAYLOAD = 96
HARQ_PAYLOAD = 60


@dataclass(frozen=True)
class Curve:
    """One curve of a figure: a scenario and the metric it plots."""

    name: str
    scenario: Scenario
    metric: str
    mode: str = "simulated"


def _fec(code):
    return ProtocolConfig(Strategy.FEC_ONLY, code=code, detector=CodeSpec.none())


def figure_curves(name: str, trials: int | None = None, seed: int = 0, sweep_points=None, geometry=None):
    """Curves of a figure.

    Parameters
    ----------
    trials : int, optional
        Sessions per point, default :data:`DEFAULT_TRIALS`.
    sweep_points : sequence, optional
        Override of the default sweep.
    geometry : dict, optional
        Keyword arguments for :meth:`Topology.from_geometry` (relay
        positions, path-loss exponent, ...).
    """
    if name not in FIGURES:
        raise ValueError(f"unknown figure {name!r}; expected one of {FIGURES}")
    trials = DEFAULT_TRIALS if trials is None else int(trials)
    geometry = dict(geometry or {})

    def top(kind):
        return Topology.from_geometry(kind, **geometry)

    mod = ModulationSpec(4)
    if name == "fig5":
        pts = DEFAULT_SNR_DB if sweep_points is None else tuple(sweep_points)
        base = dict(
            modulation=mod,
            channel=ChannelModel("rayleigh"),
            sweep_variable="snr_db",
            sweep_points=pts,
            trials_per_point=trials,
            master_seed=seed,
            payload_bits=FIG5_PAYLOAD,
        )
        rs = _fec(CodeSpec.rs(31, 21))
        return [
            Curve("uncoded", Scenario(topology=top("dt"), protocol=_fec(CodeSpec.none()), **base), "ber"),
            Curve("rs", Scenario(topology=top("dt"), protocol=rs, **base), "ber"),
            Curve("rs_src", Scenario(topology=top("src"), protocol=rs, **base), "ber"),
            Curve("rs_mrc", Scenario(topology=top("mrc"), protocol=rs, **base), "ber"),
        ]
    if name in ("fig6", "fig7"):
        pts = DEFAULT_BER if sweep_points is None else tuple(sweep_points)
        metric = "throughput" if name == "fig6" else "mean_delay"
        base = dict(
            modulation=mod,
            protocol=ProtocolConfig(Strategy.SW_ARQ),
            sweep_variable="ber",
            sweep_points=pts,
            trials_per_point=trials,
            master_seed=seed,
            payload_bits=ARQ_PAYLOAD,
        )
        curves = [Curve(k, Scenario(topology=top(k), **base), metric) for k in ("dt", "src", "mrc")]
        theory = Scenario(
            topology=top("dt"), **{**base, "protocol": replace(base["protocol"], ack_error_model="ideal")}
        )
        curves.append(Curve("theoretical", theory, metric, mode="analytic"))
        return curves
    pts = DEFAULT_SNR_DB if sweep_points is None else tuple(sweep_points)
    kind = "src" if name == "fig8" else "mrc"
    base = dict(
        modulation=mod,
        channel=ChannelModel("rayleigh"),
        sweep_variable="snr_db",
        sweep_points=pts,
        trials_per_point=trials,
        master_seed=seed,
        payload_bits=HARQ_PAYLOAD,
        topology=top(kind),
    )
    h = CodeSpec.hamming74()
    # one retransmission: the Type-2 parity increment, or a Type-1 resend
    t1 = ProtocolConfig(Strategy.HARQ_T1, code=h, max_retransmissions=1)
    t2 = ProtocolConfig(Strategy.HARQ_T2, code=h, max_retransmissions=1)
    return [
        Curve(f"harq1_{kind}", Scenario(protocol=t1, **base), "ser"),
        Curve(f"harq2_{kind}", Scenario(protocol=t2, **base), "ser"),
    ]


def theoretical_throughput_rows(scenario: Scenario) -> list[MetricsRow]:
    """Closed-form stop-and-wait rows along a BER sweep.

    ``throughput`` is exactly :func:`sw_arq_throughput_analytic` with the
    frame failure rate of ``L_p + 4`` bits at each raw BER.
    """
    rows = []
    energy = scenario.energy
    proto = scenario.protocol
    lp = scenario.payload_bits
    n_bits = lp + 4
    tx = n_bits / energy.bit_rate
    rtt = proto.round_trip if proto.round_trip is not None else proto.ack_bits / energy.bit_rate
    for i, ber in enumerate(scenario.sweep_points):
        base = analytic_point(scenario, i)
        per = 1.0 - (1.0 - ber) ** n_bits
        thr = sw_arq_throughput_analytic(per, lp, n_bits - lp, rtt, tx_time=tx)
        rows.append(replace(base, throughput=thr))
    return rows


def run_figure(
    name: str,
    trials: int | None = None,
    seed: int = 0,
    sweep_points=None,
    workers: int = 1,
    emit_analytic: bool = False,
    geometry=None,
    curves=None,
):
    """Rows of every curve of a figure, keyed by curve name.

    With `emit_analytic`, each simulated curve also gets a closed-form
    companion named ``<curve>_analytic``.  `curves` restricts the run to
    the named curves.
    """
    out = {}
    for c in figure_curves(name, trials, seed, sweep_points, geometry):
        if curves is not None and c.name not in curves:
            continue
        if c.mode == "analytic":
            if c.name == "theoretical" and c.scenario.sweep_variable == "ber":
                out[c.name] = theoretical_throughput_rows(c.scenario)
            else:
                out[c.name] = run_sweep(c.scenario, mode="analytic")
            continue
        out[c.name] = run_sweep(c.scenario, workers=workers)
        if emit_analytic:
            out[c.name + "_analytic"] = run_sweep(c.scenario, mode="analytic")
    if curves is not None:
        missing = set(curves) - set(out)
        if missing:
            raise ValueError(f"{name} has no curve(s) {sorted(missing)}")
    return out
