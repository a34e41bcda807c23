"""
Seeded sweeps over scenarios, aggregated into one metrics row per point.

Trials are run in fixed batches of :data:`BATCH_SESSIONS` sessions.  Every
random draw is keyed by ``(master_seed, point, round, link, ..., chunk)``
(see :mod:`coopwsn.streams`), so a batch gives the same numbers wherever it
runs; batches are folded in index order, which makes a row byte-identical
for any number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np
from scipy.special import erfc
from scipy.stats import binom, norm

from .channel import ChannelModel
from .codecs import CodeKind, CodeSpec
from .cooperation import CHUNK_ROWS, Topology, per_mrc, per_src
from .energy import EnergyParams, energy_dt, energy_mrc, energy_src, efficiency
from .error_control import FrameFormat, ProtocolConfig, Strategy, run_sessions, sw_arq_throughput_analytic
from .modem import ModulationSpec, ser_mqam, ser_to_ber
from .streams import StreamFactory

__all__ = [
    "SWEEP_VARIABLES",
    "MODES",
    "BATCH_SESSIONS",
    "Scenario",
    "MetricsRow",
    "PointStats",
    "confidence_interval",
    "wilson_bounds",
    "row_from_stats",
    "point_stats",
    "ratio_interval",
    "mean_interval",
    "scenario_at",
    "simulate_batch",
    "run_point",
    "analytic_point",
    "run_sweep",
    "energy_table",
    "ENERGY_TABLE_COLUMNS",
]

SWEEP_VARIABLES = ("snr_db", "ber", "distance", "code")
MODES = ("simulated", "analytic")
BATCH_SESSIONS = 16 * CHUNK_ROWS
_PAYLOAD_KEY = 1 << 20
_Z = float(norm.ppf(0.975))


# --------------------------------------------------------------------------
# intervals


def wilson_bounds(successes, trials):
    """Lower and upper bounds of the Wilson-score 95% interval."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    n, p = float(trials), successes / trials
    z2 = _Z * _Z
    centre = (p + z2 / (2 * n)) / (1 + z2 / n)
    half = _Z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n)
    # the bounds touch 0 and 1 exactly at the extremes; rounding must not move them
    lo = 0.0 if successes == 0 else max(centre - half, 0.0)
    hi = 1.0 if successes == trials else min(centre + half, 1.0)
    return lo, hi


def confidence_interval(successes, trials):
    """Wilson-score 95% interval of a binomial rate.

    Returns
    -------
    estimate : float
        ``successes / trials``.
    halfwidth : float
        Largest distance from the estimate to a Wilson bound, so
        ``estimate +- halfwidth`` covers the interval (it is symmetric only
        at ``estimate = 0.5``).

    >>> est, hw = confidence_interval(0, 100)
    >>> est, round(hw, 4)
    (0.0, 0.037)
    """
    lo, hi = wilson_bounds(successes, trials)
    p = successes / trials
    return p, max(hi - p, p - lo)


def ratio_interval(sx, sy, sxx, syy, sxy, n):
    """Delta-method 95% halfwidth of ``sum(x) / sum(y)`` over `n` clusters."""
    if n < 2 or sy <= 0:
        return float("nan")
    r = sx / sy
    var = (sxx - 2 * r * sxy + r * r * syy) / (n - 1)
    ybar = sy / n
    return _Z * math.sqrt(max(var, 0.0) / n) / ybar


def mean_interval(s, ss, n):
    """Normal 95% halfwidth of a sample mean from its sums."""
    if n < 2:
        return float("nan")
    var = (ss - s * s / n) / (n - 1)
    return _Z * math.sqrt(max(var, 0.0) / n)


# --------------------------------------------------------------------------
# scenario


@dataclass(frozen=True)
class Scenario:
    """One experiment: a topology and protocol swept along one variable.

    Attributes
    ----------
    sweep_variable : {"snr_db", "ber", "distance", "code"}
        ``snr_db`` sets every transmitter's power so the S-D link has that
        average SNR; ``ber`` switches every link to a bit-flip channel of
        that error rate; ``distance`` rebuilds the topology for that S-D
        distance (relay coordinates scale with it); ``code`` takes code
        labels such as ``"rs 31 21"``.
    payload_bits : int
        Payload length per frame.
    frames_per_session : int
        Payloads sent back to back in each session (trial).
    """

    topology: Topology = field(default_factory=lambda: Topology.from_geometry("dt"))
    modulation: ModulationSpec = field(default_factory=ModulationSpec)
    protocol: ProtocolConfig = field(default_factory=ProtocolConfig)
    energy: EnergyParams = field(default_factory=EnergyParams)
    channel: ChannelModel = field(default_factory=ChannelModel)
    sweep_variable: str = "snr_db"
    sweep_points: tuple = (10.0,)
    trials_per_point: int = 100_000
    master_seed: int = 0
    payload_bits: int = 96
    frames_per_session: int = 1
    combining: str = "sum"
    mrc_energy_model: str = "eq22"
    charge_ack: bool = False

    def __post_init__(self):
        if self.sweep_variable not in SWEEP_VARIABLES:
            raise ValueError(f"sweep_variable must be one of {SWEEP_VARIABLES}, got {self.sweep_variable!r}")
        pts = tuple(self.sweep_points)
        if not pts:
            raise ValueError("sweep_points must not be empty")
        if self.sweep_variable == "code":
            pts = tuple(CodeSpec.parse(p).label() if not isinstance(p, CodeSpec) else p.label() for p in pts)
            if len(set(pts)) != len(pts):
                raise ValueError("sweep_points must not repeat")
        else:
            pts = tuple(float(p) for p in pts)
            d = np.diff(pts)
            if len(pts) > 1 and not (np.all(d > 0) or np.all(d < 0)):
                raise ValueError("sweep_points must be strictly ordered")
            if self.sweep_variable == "ber" and any(not 0 <= p <= 1 for p in pts):
                raise ValueError("ber sweep points must lie in [0, 1]")
            if self.sweep_variable == "distance" and any(p <= 0 for p in pts):
                raise ValueError("distance sweep points must be > 0")
        object.__setattr__(self, "sweep_points", pts)
        if not isinstance(self.trials_per_point, (int, np.integer)) or self.trials_per_point < 1:
            raise ValueError("trials_per_point must be an integer >= 1")
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        if self.payload_bits < 1:
            raise ValueError("payload_bits must be >= 1")
        if self.frames_per_session < 1:
            raise ValueError("frames_per_session must be >= 1")


def scenario_at(scenario: Scenario, value):
    """Topology, protocol and channel in effect at one sweep value."""
    top, proto, ch = scenario.topology, scenario.protocol, scenario.channel
    var = scenario.sweep_variable
    if var == "snr_db":
        target = 10.0 ** (float(value) / 10.0)
        sd = top.link_sd
        base = sd.gain * sd.distance ** (-sd.path_loss_exponent) / sd.noise_power
        top = top.with_tx_power(target / base)
    elif var == "ber":
        ch = ChannelModel("bit_flip", float(value))
    elif var == "distance":
        top = top.scaled(float(value) / top.link_sd.distance)
    else:
        proto = replace(proto, code=CodeSpec.parse(value))
    return top, proto, ch


# --------------------------------------------------------------------------
# results


_COUNT_FIELDS = (
    "sessions", "payloads", "delivered", "duplicates", "wrong_accepts",
    "bit_errors", "bits", "symbol_errors", "symbols", "attempts", "attempt_failures",
    "data_bits", "control_bits", "sd_n", "sd_fail", "e2e_n", "e2e_fail",
)
_SUM_FIELDS = (
    "be_sq", "se_sq", "x", "xx", "y", "yy", "xy", "e", "ee", "xe",
    "delay", "delay_sq", "att_sq",
)


@dataclass
class PointStats:
    """Integer counts and float sums of a set of sessions.

    ``x``, ``y`` and ``e`` are per-session delivered payload bits, elapsed
    time and energy; their products feed the delta-method intervals.
    """

    n_relays: int = 0
    sessions: int = 0
    payloads: int = 0
    delivered: int = 0
    duplicates: int = 0
    wrong_accepts: int = 0
    bit_errors: int = 0
    bits: int = 0
    symbol_errors: int = 0
    symbols: int = 0
    attempts: int = 0
    attempt_failures: int = 0
    data_bits: int = 0
    control_bits: int = 0
    sd_n: int = 0
    sd_fail: int = 0
    e2e_n: int = 0
    e2e_fail: int = 0
    be_sq: float = 0.0
    se_sq: float = 0.0
    x: float = 0.0
    xx: float = 0.0
    y: float = 0.0
    yy: float = 0.0
    xy: float = 0.0
    e: float = 0.0
    ee: float = 0.0
    xe: float = 0.0
    delay: float = 0.0
    delay_sq: float = 0.0
    att_sq: float = 0.0
    sr_n: tuple = ()
    sr_fail: tuple = ()
    rd_n: tuple = ()
    rd_fail: tuple = ()
    events: tuple = (0, 0, 0, 0)

    def merge(self, other: "PointStats") -> "PointStats":
        out = PointStats(n_relays=max(self.n_relays, other.n_relays))
        for name in _COUNT_FIELDS + _SUM_FIELDS:
            setattr(out, name, getattr(self, name) + getattr(other, name))
        for name in ("sr_n", "sr_fail", "rd_n", "rd_fail", "events"):
            a, b = getattr(self, name), getattr(other, name)
            if not a:
                a = (0,) * len(b)
            if not b:
                b = (0,) * len(a)
            setattr(out, name, tuple(int(u + v) for u, v in zip(a, b)))
        return out

    def link_per(self):
        """Measured detected-failure rate per link (``nan`` if never tried)."""

        def rate(f, n):
            return f / n if n else float("nan")

        out = {"sd": rate(self.sd_fail, self.sd_n)}
        for i in range(self.n_relays):
            out[f"sr{i + 1}"] = rate(self.sr_fail[i], self.sr_n[i])
            out[f"r{i + 1}d"] = rate(self.rd_fail[i], self.rd_n[i])
        return out


@dataclass(frozen=True)
class MetricsRow:
    """Metrics of one sweep point with 95% confidence halfwidths.

    Rates are per bit (``ber``), per symbol (``ser``) of the destination's
    final payload estimates, and per destination decoding attempt
    (``per``).  ``throughput`` is delivered payload bits over elapsed time,
    ``mean_delay`` the mean elapsed time of delivered payloads,
    ``energy_per_packet`` the mean energy spent per payload and
    ``efficiency`` delivered bits per joule.
    """

    sweep_value: object
    ber: float
    ser: float
    per: float
    throughput: float
    mean_delay: float
    energy_per_packet: float
    efficiency: float
    ci_ber: float
    ci_ser: float
    ci_per: float
    ci_throughput: float
    ci_mean_delay: float
    ci_energy_per_packet: float
    ci_efficiency: float
    trials: int
    delivery_rate: float = float("nan")
    mean_attempts: float = float("nan")
    mode: str = "simulated"

    @classmethod
    def columns(cls):
        return [f.name for f in fields(cls)]

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


# --------------------------------------------------------------------------
# simulation


def _payloads(streams: StreamFactory, start: int, count: int, frames: int, bits: int):
    out = np.empty((count, frames, bits), dtype=np.uint8)
    stop = start + count
    c0 = start // CHUNK_ROWS
    for c in range(c0, -(-stop // CHUNK_ROWS)):
        lo, hi = c * CHUNK_ROWS, (c + 1) * CHUNK_ROWS
        g = streams.generator(_PAYLOAD_KEY, c)
        block = g.integers(0, 2, size=(CHUNK_ROWS, frames, bits), dtype=np.uint8)
        a, b = max(lo, start), min(hi, stop)
        out[a - start : b - start] = block[a - lo : b - lo]
    return out


def simulate_batch(scenario: Scenario, point_index: int, start: int, count: int) -> PointStats:
    """Run sessions ``start .. start+count-1`` of one sweep point."""
    value = scenario.sweep_points[point_index]
    top, proto, ch = scenario_at(scenario, value)
    streams = StreamFactory(int(scenario.master_seed), (point_index,))
    P = _payloads(streams, start, count, scenario.frames_per_session, scenario.payload_bits)
    energy = replace(
        scenario.energy,
        frame_bits=scenario.payload_bits,
        payload_bits=scenario.payload_bits,
        bits_per_symbol=scenario.modulation.bits_per_symbol,
    )
    res = run_sessions(
        top,
        proto,
        P,
        streams,
        channel=ch,
        modulation=scenario.modulation,
        energy=energy,
        combining=scenario.combining,
        mrc_energy_model=scenario.mrc_energy_model,
        charge_ack=scenario.charge_ack,
        session_ids=np.arange(start, start + count),
    )
    started = res.started
    lp = res.payload_bits
    nsym = -(-lp // res.bits_per_symbol)
    be = res.bit_errors.sum(axis=1).astype(float)
    se = res.symbol_errors.sum(axis=1).astype(float)
    x = (res.delivered.sum(axis=1) * lp).astype(float)
    y = res.elapsed.sum(axis=1)
    e = res.energy.sum(axis=1)
    d = res.elapsed[res.delivered]
    att = res.attempts[started].astype(float)
    lk = res.link
    return PointStats(
        n_relays=top.n_relays,
        sessions=count,
        payloads=int(started.sum()),
        delivered=int(res.delivered.sum()),
        duplicates=int((res.deliveries > 1).sum()),
        wrong_accepts=int(res.accepted_wrong.sum()),
        bit_errors=int(be.sum()),
        bits=int(started.sum()) * lp,
        symbol_errors=int(se.sum()),
        symbols=int(started.sum()) * nsym,
        attempts=res.attempt_count,
        attempt_failures=res.attempt_fail,
        data_bits=int(res.data_bits.sum()),
        control_bits=int(res.control_bits.sum()),
        sd_n=lk.sd_n,
        sd_fail=lk.sd_fail,
        e2e_n=lk.e2e_n,
        e2e_fail=lk.e2e_fail,
        be_sq=float(be @ be),
        se_sq=float(se @ se),
        x=float(x.sum()),
        xx=float(x @ x),
        y=float(y.sum()),
        yy=float(y @ y),
        xy=float(x @ y),
        e=float(e.sum()),
        ee=float(e @ e),
        xe=float(x @ e),
        delay=float(d.sum()),
        delay_sq=float(d @ d),
        att_sq=float(att @ att),
        sr_n=tuple(int(v) for v in lk.sr_n),
        sr_fail=tuple(int(v) for v in lk.sr_fail),
        rd_n=tuple(int(v) for v in lk.rd_n),
        rd_fail=tuple(int(v) for v in lk.rd_fail),
        events=tuple(int(v) for v in lk.events),
    )


def _batches(trials: int):
    return [(s, min(BATCH_SESSIONS, trials - s)) for s in range(0, trials, BATCH_SESSIONS)]


def _run_task(args):
    scenario, point, start, count = args
    return simulate_batch(scenario, point, start, count)


def row_from_stats(value, st: PointStats, trials: int) -> MetricsRow:
    """Metrics of a folded point."""
    n = st.sessions
    spp = st.payloads / n if n else 1.0
    ber = st.bit_errors / st.bits
    ser = st.symbol_errors / st.symbols
    # errors cluster within a frame, so the rate intervals are per session
    ci_ber = ratio_interval(st.bit_errors, st.bits, st.be_sq, (st.bits / n) ** 2 * n, st.bit_errors * st.bits / n, n)
    ci_ser = ratio_interval(
        st.symbol_errors, st.symbols, st.se_sq, (st.symbols / n) ** 2 * n, st.symbol_errors * st.symbols / n, n
    )
    per, ci_per = confidence_interval(st.attempt_failures, st.attempts) if st.attempts else (float("nan"),) * 2
    thr = st.x / st.y if st.y > 0 else 0.0
    ci_thr = ratio_interval(st.x, st.y, st.xx, st.yy, st.xy, n)
    if st.delivered:
        delay = st.delay / st.delivered
        ci_delay = mean_interval(st.delay, st.delay_sq, st.delivered)
    else:
        delay = ci_delay = float("nan")
    epp = st.e / st.payloads
    ci_epp = mean_interval(st.e, st.ee, n) / spp
    eff = st.x / st.e if st.e > 0 else 0.0
    ci_eff = ratio_interval(st.x, st.e, st.xx, st.ee, st.xe, n)
    return MetricsRow(
        sweep_value=value,
        ber=ber,
        ser=ser,
        per=per,
        throughput=thr,
        mean_delay=delay,
        energy_per_packet=epp,
        efficiency=eff,
        ci_ber=ci_ber,
        ci_ser=ci_ser,
        ci_per=ci_per,
        ci_throughput=ci_thr,
        ci_mean_delay=ci_delay,
        ci_energy_per_packet=ci_epp,
        ci_efficiency=ci_eff,
        trials=trials,
        delivery_rate=st.delivered / st.payloads,
        mean_attempts=st.attempts / st.payloads,
        mode="simulated",
    )


def _fold(parts):
    out = PointStats()
    for p in parts:
        out = out.merge(p)
    return out


def point_stats(scenario: Scenario, point_index: int, workers: int = 1) -> PointStats:
    """Folded statistics of one sweep point."""
    if not 0 <= point_index < len(scenario.sweep_points):
        raise ValueError(f"point_index {point_index} outside 0..{len(scenario.sweep_points) - 1}")
    tasks = [(scenario, point_index, s, c) for s, c in _batches(scenario.trials_per_point)]
    return _fold(_map(tasks, workers))


def _map(tasks, workers):
    if workers is None or workers <= 1 or len(tasks) <= 1:
        return [_run_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_task, tasks))


def run_point(scenario: Scenario, point_index: int, workers: int = 1) -> MetricsRow:
    """Simulate one sweep point (``trials_per_point`` sessions)."""
    st = point_stats(scenario, point_index, workers)
    return row_from_stats(scenario.sweep_points[point_index], st, scenario.trials_per_point)


# --------------------------------------------------------------------------
# closed forms


def _ser_awgn(sigma, b):
    m = 2.0**b
    a = 1.0 - 1.0 / math.sqrt(m)
    q = 0.5 * erfc(np.sqrt(1.5 * sigma / (m - 1.0)))
    return float(np.clip(4 * a * q - 4 * a * a * q * q, 0.0, 1.0))


def _link_rates(channel: ChannelModel, sigma: float, b: int):
    """(ser, ber) of one link."""
    if channel.kind == "rayleigh":
        ser = ser_mqam(sigma, b)
        return ser, ser_to_ber(ser, b)
    if channel.kind == "awgn":
        ser = _ser_awgn(sigma, b)
        return ser, ser_to_ber(ser, b)
    p = channel.error_rate
    if channel.kind == "bit_flip":
        return 1.0 - (1.0 - p) ** b, p
    if channel.kind == "symbol_error":
        # a wrong symbol is uniform over the other 2^b - 1 patterns
        return p, p * (2 ** (b - 1)) / (2**b - 1)
    return float("nan"), float("nan")


def _frame_failure(channel, ser, ber, n_bits, b, code: CodeSpec, blocks: int):
    """Probability that a frame of `n_bits` on-air bits is not recovered."""
    if channel.kind == "frame_error":
        return channel.error_rate
    if code.kind is CodeKind.HAMMING74:
        ok_block = binom.cdf(1, 7, ber)
        return 1.0 - ok_block**blocks
    if code.kind is CodeKind.REED_SOLOMON:
        m = code.rs_symbol_bits
        ps = 1.0 - (1.0 - ber) ** m
        ok_block = binom.cdf(code.t, code.rs_n, ps)
        return 1.0 - ok_block**blocks
    if channel.kind == "bit_flip":
        return 1.0 - (1.0 - ber) ** n_bits
    return 1.0 - (1.0 - ser) ** (-(-n_bits // b))


def _analytic_links(scenario: Scenario, value):
    top, proto, ch = scenario_at(scenario, value)
    b = scenario.modulation.bits_per_symbol
    fmt = FrameFormat(proto, scenario.payload_bits)
    kind0 = int(fmt.kind_of(np.array([0]))[0])
    n_bits = fmt.length(kind0)
    code = proto.code if kind0 != 0 else CodeSpec.none()
    rates = {name: _link_rates(ch, s, b) for name, s in top.sigmas().items()}
    fail = {name: _frame_failure(ch, r[0], r[1], n_bits, b, code, fmt.blocks) for name, r in rates.items()}
    return top, proto, ch, fail, rates, n_bits


ENERGY_TABLE_COLUMNS = (
    "per_dt", "per_src", "per_mrc", "energy_dt", "energy_src", "energy_mrc", "eta_dt", "eta_src", "eta_mrc",
)


def energy_table(scenario: Scenario):
    """Closed-form per-packet energy and efficiency of all three topologies.

    The scenario's geometry is reused for every topology (extra relays come
    from the default positions if the scenario has fewer).  Each row holds
    the sweep value followed by :data:`ENERGY_TABLE_COLUMNS`; efficiency is
    ``L_p (1 - per) / E`` of a single transmission.
    """
    base = scenario.topology
    rows = []
    for value in scenario.sweep_points:
        pers, energies, etas = [], [], []
        for kind in ("dt", "src", "mrc"):
            top = _topology_for(base, kind)
            sc = replace(scenario, topology=top, sweep_points=(value,))
            tp, _, _, fail, _, n_bits = _analytic_links(sc, value)
            e = replace(
                scenario.energy,
                frame_bits=n_bits,
                payload_bits=scenario.payload_bits,
                bits_per_symbol=scenario.modulation.bits_per_symbol,
            )
            if kind == "dt":
                per, en = fail["sd"], energy_dt(e)
            elif kind == "src":
                per = per_src(fail["sd"], fail["sr1"], fail["r1d"])
                en = energy_src(e, fail["sd"], fail["sr1"])
            else:
                per = per_mrc(fail["sd"], fail["sr1"], fail["sr2"], fail["r1d"], fail["r2d"])
                en = energy_mrc(e, fail["sd"], fail["sr1"], fail["sr2"], scenario.mrc_energy_model)
            pers.append(float(per))
            energies.append(float(en))
            etas.append(float(efficiency(scenario.payload_bits, per, en)))
        rows.append([value, *pers, *energies, *etas])
    return rows


def _topology_for(base: Topology, kind: str) -> Topology:
    n = {"dt": 0, "src": 1, "mrc": 2}[kind]
    if base.n_relays >= n:
        return base.as_kind(kind)
    sd = base.link_sd
    full = Topology.from_geometry(
        "mrc", sd.distance, path_loss_exponent=sd.path_loss_exponent, tx_power=sd.tx_power, noise_power=sd.noise_power
    )
    sr = base.link_sr + full.link_sr[base.n_relays :]
    rd = base.link_rd + full.link_rd[base.n_relays :]
    return Topology(kind, sd, sr[:n], rd[:n])


def analytic_point(scenario: Scenario, point_index: int) -> MetricsRow:
    """Closed-form metrics of one sweep point.

    ``ber`` and ``ser`` are the raw S-D link rates.  Link failure rates
    assume independent symbol (or, for bit-flip links, bit) errors; they are
    composed over the topology and the protocol treats attempts as
    independent trials, with the truncated geometric law for retries.
    """
    value = scenario.sweep_points[point_index]
    top, proto, ch, fail, rates, n_bits = _analytic_links(scenario, value)
    b = scenario.modulation.bits_per_symbol
    lp = scenario.payload_bits
    if top.kind == "dt":
        per = fail["sd"]
    elif top.kind == "src":
        per = per_src(fail["sd"], fail["sr1"], fail["r1d"])
    else:
        per = per_mrc(fail["sd"], fail["sr1"], fail["sr2"], fail["r1d"], fail["r2d"])
    energy = replace(scenario.energy, frame_bits=n_bits, payload_bits=lp, bits_per_symbol=b)
    if top.kind == "dt":
        e_att = energy_dt(energy)
    elif top.kind == "src":
        e_att = energy_src(energy, fail["sd"], fail["sr1"])
    else:
        e_att = energy_mrc(energy, fail["sd"], fail["sr1"], fail["sr2"], scenario.mrc_energy_model)
    tx = n_bits / energy.bit_rate
    ser, ber = rates["sd"]
    if proto.has_feedback:
        rtt = proto.round_trip if proto.round_trip is not None else proto.ack_bits / energy.bit_rate
        if proto.ack_error_model == "same_channel":
            cs, cb = rates["ds"]
            ack_fail = _frame_failure(ch, cs, cb, proto.ack_bits, b, CodeSpec.none(), 1)
        else:
            ack_fail = 0.0
        q = 1.0 - (1.0 - per) * (1.0 - ack_fail)
        n = proto.max_attempts
        deliver = 1.0 - q**n
        mean_att = (1.0 - q**n) / (1.0 - q) if q < 1 else float(n)
        thr = sw_arq_throughput_analytic(q, lp, n_bits - lp, rtt, tx_time=tx)
        if deliver > 0:
            k = np.arange(1, n + 1)
            pk = q ** (k - 1) * (1 - q)
            delay = float((k * pk).sum() / pk.sum()) * (tx + rtt)
        else:
            delay = float("nan")
        epp = e_att * mean_att
        eff = lp * deliver / epp if epp > 0 else 0.0
    else:
        deliver = 1.0 - per
        mean_att = 1.0
        thr = lp * deliver / tx
        delay = tx
        epp = e_att
        eff = efficiency(lp, per, e_att)
    zero = 0.0
    return MetricsRow(
        sweep_value=value,
        ber=float(ber),
        ser=float(ser),
        per=float(per),
        throughput=float(thr),
        mean_delay=float(delay),
        energy_per_packet=float(epp),
        efficiency=float(eff),
        ci_ber=zero,
        ci_ser=zero,
        ci_per=zero,
        ci_throughput=zero,
        ci_mean_delay=zero,
        ci_energy_per_packet=zero,
        ci_efficiency=zero,
        trials=0,
        delivery_rate=float(deliver),
        mean_attempts=float(mean_att),
        mode="analytic",
    )


def run_sweep(scenario: Scenario, mode: str = "simulated", workers: int = 1) -> list[MetricsRow]:
    """One row per sweep point, in sweep order.

    With ``workers > 1`` the batches of all points are spread over a process
    pool; the fold still runs in batch order per point.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    n_pts = len(scenario.sweep_points)
    if mode == "analytic":
        return [analytic_point(scenario, i) for i in range(n_pts)]
    batches = _batches(scenario.trials_per_point)
    tasks = [(scenario, i, s, c) for i in range(n_pts) for s, c in batches]
    parts = _map(tasks, workers)
    per_point = len(batches)
    rows = []
    for i in range(n_pts):
        st = _fold(parts[i * per_point : (i + 1) * per_point])
        rows.append(row_from_stats(scenario.sweep_points[i], st, scenario.trials_per_point))
    return rows
