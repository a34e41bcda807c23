"""
Vectorised session engine shared by every strategy.

A *session* sends ``F`` payloads one after another over a topology with one
stop-and-wait sender (window of one, one-bit SeqNum) and one receiver (one-bit
NFE).  All sessions of a batch advance in lock-step rounds; in every round
each active session makes one attempt.  Random streams are keyed by round and
global session index, so a session's history does not depend on which other
sessions share its batch.

Receiver rule: a frame whose check passes is accepted iff its SeqNum equals
NFE, then NFE flips; any heard frame is answered with ACK (check passed) or
NACK (failed) carrying the current NFE.  Sender rule: the payload is done when
valid feedback carries ``NFE != SeqNum``; otherwise it retries after the
feedback (or after the timeout if no valid feedback arrived).  A sender that
exhausts its retries abandons the session, since a one-bit SeqNum cannot skip
a payload safely.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..channel import ChannelModel
from ..cooperation import Topology, send_link, transport
from ..energy import EnergyParams, mrc_relay_power, power_dt
from ..modem import ModulationSpec
from ..streams import LINK_IDS, as_streams
from .config import ProtocolConfig, Strategy
from .frames import FrameKind, decode_control, encode_control
from .schemes import FrameFormat, ProtocolReceiver

__all__ = ["FaultPlan", "LinkStats", "SessionResults", "run_sessions", "ATTEMPT_DTYPE", "Outcome"]


class Outcome:
    """Receiver-side result of one attempt."""

    ACCEPTED = 0
    DUPLICATE = 1
    REJECTED = 2  # check failed, NACK sent
    LOST = 3      # nothing heard
    DECODED = 4   # FEC-only, no check outcome reported back


ATTEMPT_DTYPE = np.dtype(
    [
        ("session", np.int64),
        ("frame", np.int32),
        ("attempt", np.int32),
        ("kind", np.int8),
        ("event", np.int8),
        ("outcome", np.int8),
        ("feedback", np.int8),
        ("bits", np.int64),
        ("elapsed", np.float64),
    ]
)


class FaultPlan:
    """Forced link outcomes per ``(session, round, link)``.

    Parameters
    ----------
    codes : ndarray of int, shape ``(sessions, rounds, 7)``
        :class:`coopwsn.cooperation.Fault` codes; the last axis follows
        :data:`coopwsn.streams.LINK_IDS`.  Rounds beyond the array use the
        channel.
    """

    def __init__(self, codes):
        codes = np.asarray(codes, dtype=np.int8)
        if codes.ndim != 3 or codes.shape[2] != len(LINK_IDS):
            raise ValueError(f"fault codes must have shape (sessions, rounds, {len(LINK_IDS)})")
        if codes.min(initial=0) < 0 or codes.max(initial=0) > 4:
            raise ValueError("fault codes must lie in 0..4")
        self.codes = codes

    def for_round(self, rows, rnd, names):
        if rnd >= self.codes.shape[1]:
            return {}
        out = {}
        for name in names:
            c = self.codes[rows, rnd, LINK_IDS[name]]
            if np.any(c):
                out[name] = c
        return out


@dataclass
class LinkStats:
    """Detected-failure counts per link and end to end (per attempt)."""

    n_relays: int
    sd_n: int = 0
    sd_fail: int = 0
    sr_n: np.ndarray = None
    sr_fail: np.ndarray = None
    rd_n: np.ndarray = None
    rd_fail: np.ndarray = None
    e2e_n: int = 0
    e2e_fail: int = 0
    events: np.ndarray = None

    def __post_init__(self):
        z = lambda: np.zeros(self.n_relays, dtype=np.int64)  # noqa: E731
        self.sr_n = z() if self.sr_n is None else self.sr_n
        self.sr_fail = z() if self.sr_fail is None else self.sr_fail
        self.rd_n = z() if self.rd_n is None else self.rd_n
        self.rd_fail = z() if self.rd_fail is None else self.rd_fail
        self.events = np.zeros(4, dtype=np.int64) if self.events is None else self.events

    def add(self, res):
        heard = res.sd_heard
        self.sd_n += int(heard.sum())
        self.sd_fail += int((heard & ~res.sd_ok).sum())
        for i in range(self.n_relays):
            h = res.sr_heard[:, i]
            self.sr_n[i] += int(h.sum())
            self.sr_fail[i] += int((h & ~res.sr_ok[:, i]).sum())
            c = res.rd_checked[:, i]
            self.rd_n[i] += int(c.sum())
            self.rd_fail[i] += int((c & ~res.rd_ok[:, i]).sum())
        self.e2e_n += len(res.ok)
        self.e2e_fail += int((~res.ok).sum())
        self.events += np.bincount(res.event, minlength=4)

    def merge(self, other: "LinkStats"):
        for name in ("sd_n", "sd_fail", "e2e_n", "e2e_fail"):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        for name in ("sr_n", "sr_fail", "rd_n", "rd_fail", "events"):
            setattr(self, name, getattr(self, name) + getattr(other, name))


@dataclass
class SessionResults:
    """Per-payload outcomes of a batch, arrays of shape ``(sessions, F)``."""

    payload_bits: int
    bits_per_symbol: int
    started: np.ndarray
    attempts: np.ndarray
    deliveries: np.ndarray
    acked: np.ndarray
    data_bits: np.ndarray
    control_bits: np.ndarray
    elapsed: np.ndarray
    energy: np.ndarray
    bit_errors: np.ndarray
    symbol_errors: np.ndarray
    accepted_wrong: np.ndarray
    events: list
    link: LinkStats
    attempt_count: int = 0
    attempt_fail: int = 0
    attempt_bit_errors: int = 0
    attempt_symbol_errors: int = 0
    attempt_bits: int = 0
    attempt_symbols: int = 0
    accept_order: list = field(default_factory=list)
    records: np.ndarray | None = None
    estimates: np.ndarray | None = None

    @property
    def delivered(self) -> np.ndarray:
        return self.deliveries > 0


def _case_powers(topology: Topology, energy: EnergyParams, mrc_model: str):
    pa, ct, cr = energy.pa_power, energy.tx_circuit_power, energy.rx_circuit_power
    if topology.kind == "dt":
        p = power_dt(energy)
        return np.array([0.0, p, p, p])
    if topology.kind == "src":
        single = pa + ct + 2 * cr
        return np.array([0.0, single, single, 2 * pa + 2 * ct + 3 * cr])
    single = pa + ct + 3 * cr
    return np.array([0.0, single, single, mrc_relay_power(energy, mrc_model)])


def run_sessions(
    topology: Topology,
    protocol: ProtocolConfig,
    payloads,
    streams,
    *,
    channel: ChannelModel = ChannelModel(),
    modulation: ModulationSpec = ModulationSpec(4),
    energy: EnergyParams | None = None,
    combining: str = "sum",
    mrc_energy_model: str = "eq22",
    charge_ack: bool = False,
    fault_plan: FaultPlan | None = None,
    session_ids=None,
    record: bool = False,
    keep_estimates: bool = False,
) -> SessionResults:
    """Run a batch of sessions.

    Parameters
    ----------
    payloads : ndarray of uint8, shape ``(sessions, F, payload_bits)``
        Payload bits; ``F`` payloads are sent in order in each session.
    streams : StreamFactory, int or Generator
        Random streams (bound to the experiment point).
    session_ids : ndarray of int, optional
        Global indices of the sessions (random stream keys); default
        ``arange(sessions)``.
    record : bool
        Keep one :data:`ATTEMPT_DTYPE` record per attempt.
    keep_estimates : bool
        Keep the destination's final payload estimates.
    """
    streams = as_streams(streams)
    payloads = np.asarray(payloads, dtype=np.uint8)
    if payloads.ndim == 2:
        payloads = payloads[:, None, :]
    if payloads.ndim != 3 or payloads.shape[2] == 0:
        raise ValueError("payloads must have shape (sessions, F, payload_bits)")
    S, F, Lp = payloads.shape
    ids = np.arange(S, dtype=np.int64) if session_ids is None else np.asarray(session_ids, dtype=np.int64)
    if ids.shape != (S,):
        raise ValueError("session_ids must give one id per session")
    energy = energy or EnergyParams(frame_bits=Lp, payload_bits=Lp, bits_per_symbol=modulation.bits_per_symbol)
    fmt = FrameFormat(protocol, Lp)
    b = modulation.bits_per_symbol
    rb = energy.bit_rate
    rtt = protocol.round_trip if protocol.round_trip is not None else protocol.ack_bits / rb
    powers = _case_powers(topology, energy, mrc_energy_model)
    ack_energy = power_dt(energy) * protocol.ack_bits / rb if charge_ack else 0.0
    sigma_ds = topology.sigmas()["ds"]
    link_names = ["sd", "ds"] + [f"sr{i + 1}" for i in range(topology.n_relays)] + [
        f"r{i + 1}d" for i in range(topology.n_relays)
    ]

    def airtime(kind):
        return fmt.length(kind) / rb

    def timeout(kind):
        if protocol.timeout is not None:
            return protocol.timeout
        return 2.0 * airtime(kind) + protocol.processing_time

    shape = (S, F)
    started = np.zeros(shape, bool)
    attempts = np.zeros(shape, np.int64)
    deliveries = np.zeros(shape, np.int64)
    acked = np.zeros(shape, bool)
    data_bits = np.zeros(shape, np.int64)
    control_bits = np.zeros(shape, np.int64)
    elapsed = np.zeros(shape)
    spent = np.zeros(shape)
    accepted_wrong = np.zeros(shape, bool)
    estimate = np.zeros((S, F, Lp), np.uint8)
    events = [[[] for _ in range(F)] for _ in range(S)] if record else []
    link = LinkStats(topology.n_relays)

    active = np.ones(S, bool)
    pidx = np.zeros(S, np.int64)
    attempt = np.zeros(S, np.int64)
    seq = np.zeros(S, np.int64)
    nfe = np.zeros(S, np.int64)
    started[:, 0] = True
    info = fmt.info(payloads[:, 0, :])
    info_all = np.zeros((S, fmt.info_bits), np.uint8)
    info_all[:] = info
    needs_code = protocol.strategy is not Strategy.SW_ARQ
    code_all = fmt.codeword(info_all) if needs_code else None

    recv = ProtocolReceiver(fmt, S)
    att_count = att_fail = att_bit_err = att_sym_err = 0
    accept_order = []
    recs = []
    max_rounds = F * protocol.max_attempts
    rnd = 0
    while active.any() and rnd < max_rounds:
        act = np.nonzero(active)[0]
        kinds = fmt.kind_of(attempt[act])
        rs = streams.child(rnd)
        for k in np.unique(kinds):
            k = int(k)
            rows = act[kinds == k]
            g = ids[rows]
            frame = fmt.frame(k, info_all[rows], None if code_all is None else code_all[rows])
            recv.kind = k
            hook = _Remap(recv, rows, g)
            faults = fault_plan.for_round(rows, rnd, link_names) if fault_plan is not None else None
            res = transport(
                topology,
                frame,
                hook,
                rs,
                rows=g,
                channel=channel,
                modulation=modulation,
                kind=k,
                combining=combining,
                faults=faults,
            )
            link.add(res)
            p_rows = pidx[rows]
            truth = payloads[rows, p_rows]
            est = res.payload if res.payload.shape[1] else np.zeros_like(truth)
            correct = res.ok & res.heard & np.all(est == truth, axis=1)
            err_bits = (est != truth)
            att_count += len(rows)
            att_fail += int((~correct).sum())
            att_bit_err += int(err_bits.sum())
            pad = (-Lp) % b
            eb = np.concatenate([err_bits, np.zeros((len(rows), pad), bool)], axis=1) if pad else err_bits
            att_sym_err += int(eb.reshape(len(rows), -1, b).any(axis=2).sum())

            dup = seq[rows] != nfe[rows]
            accept = res.heard & res.ok & ~dup
            # latest estimate unless already accepted
            upd = res.heard & (deliveries[rows, p_rows] == 0)
            estimate[rows[upd], p_rows[upd]] = est[upd]
            acc_rows = rows[accept]
            if acc_rows.size:
                estimate[acc_rows, pidx[acc_rows]] = est[accept]
                deliveries[acc_rows, pidx[acc_rows]] += 1
                accepted_wrong[acc_rows, pidx[acc_rows]] |= ~correct[accept]
                nfe[acc_rows] ^= 1
                accept_order.extend(zip(ids[acc_rows].tolist(), pidx[acc_rows].tolist()))

            n_bits = fmt.length(k)
            sent = n_bits * (1 + res.relay_transmissions)
            data_bits[rows, p_rows] += sent
            attempts[rows, p_rows] += 1
            spent[rows, p_rows] += powers[res.event] * n_bits / rb

            if protocol.has_feedback:
                respond = res.heard
                resp_rows = rows[respond]
                fb_ok = np.zeros(len(rows), bool)
                fb_nfe = np.zeros(len(rows), np.int64)
                if resp_rows.size:
                    ctrl = encode_control(
                        np.where(res.ok[respond], FrameKind.ACK, FrameKind.NACK), nfe[resp_rows], protocol.ack_bits
                    )
                    ds_faults = None
                    if faults and "ds" in faults:
                        ds_faults = faults["ds"][respond]
                    ack_channel = channel if protocol.ack_error_model == "same_channel" else None
                    rx, lost = send_link(
                        "ds", sigma_ds, ctrl, rs, rows=g[respond], channel=ack_channel,
                        modulation=modulation, kind=k, faults=ds_faults,
                    )
                    valid, _, got_nfe = decode_control(rx)
                    fb_ok[respond] = valid & ~lost
                    fb_nfe[respond] = got_nfe
                    control_bits[resp_rows, pidx[resp_rows]] += protocol.ack_bits
                    spent[resp_rows, pidx[resp_rows]] += ack_energy
                step = np.where(fb_ok, airtime(k) + rtt, timeout(k))
                done = fb_ok & (fb_nfe != seq[rows])
                outcome = np.where(
                    ~res.heard, Outcome.LOST, np.where(accept, Outcome.ACCEPTED, np.where(res.ok, Outcome.DUPLICATE, Outcome.REJECTED))
                )
                feedback = np.where(fb_ok, 1, 0)
            else:
                step = np.full(len(rows), airtime(k))
                done = np.ones(len(rows), bool)
                outcome = np.where(res.heard, Outcome.DECODED, Outcome.LOST)
                feedback = np.full(len(rows), -1)
            elapsed[rows, p_rows] += step
            if record:
                r = np.zeros(len(rows), dtype=ATTEMPT_DTYPE)
                r["session"] = g
                r["frame"] = p_rows
                r["attempt"] = attempt[rows]
                r["kind"] = k
                r["event"] = res.event
                r["outcome"] = outcome
                r["feedback"] = feedback
                r["bits"] = sent
                r["elapsed"] = step
                recs.append(r)
                for ri, ev in zip(rows, res.event):
                    events[ri][pidx[ri]].append(int(ev))

            acked[rows[done], p_rows[done]] = True
            attempt[rows] += 1
            give_up = ~done & (attempt[rows] >= protocol.max_attempts)
            active[rows[give_up]] = False
            nxt = rows[done]
            if nxt.size:
                pidx[nxt] += 1
                finished = pidx[nxt] >= F
                active[nxt[finished]] = False
                cont = nxt[~finished]
                if cont.size:
                    attempt[cont] = 0
                    seq[cont] ^= 1
                    started[cont, pidx[cont]] = True
                    info_all[cont] = fmt.info(payloads[cont, pidx[cont]])
                    if code_all is not None:
                        code_all[cont] = fmt.codeword(info_all[cont])
                    recv.reset(cont)
        rnd += 1

    diff = estimate != payloads
    pad = (-Lp) % b
    if pad:
        diff_s = np.concatenate([diff, np.zeros((S, F, pad), bool)], axis=2)
    else:
        diff_s = diff
    sym_err = diff_s.reshape(S, F, -1, b).any(axis=3).sum(axis=2)
    records = np.concatenate(recs) if recs else (np.zeros(0, dtype=ATTEMPT_DTYPE) if record else None)
    if records is not None and records.size:
        records = records[np.lexsort((records["attempt"], records["frame"], records["session"]))]
    return SessionResults(
        payload_bits=Lp,
        bits_per_symbol=b,
        started=started,
        attempts=attempts,
        deliveries=deliveries,
        acked=acked,
        data_bits=data_bits,
        control_bits=control_bits,
        elapsed=elapsed,
        energy=spent,
        bit_errors=np.where(started, diff.sum(axis=2), 0),
        symbol_errors=np.where(started, sym_err, 0),
        accepted_wrong=accepted_wrong,
        events=events,
        link=link,
        attempt_count=att_count,
        attempt_fail=att_fail,
        attempt_bit_errors=att_bit_err,
        attempt_symbol_errors=att_sym_err,
        attempt_bits=att_count * Lp,
        attempt_symbols=att_count * (-(-Lp // b)),
        accept_order=accept_order,
        records=records,
        estimates=estimate if keep_estimates else None,
    )


class _Remap:
    """Adapts global session ids used by the transport to local row indices."""

    def __init__(self, recv, rows, ids):
        self.recv = recv
        self.rows = rows
        self.ids = ids
        self._sorted = np.argsort(ids)

    def decode(self, node, global_rows, rx):
        pos = np.searchsorted(self.ids[self._sorted], global_rows)
        local_rows = self.rows[self._sorted[pos]]
        return self.recv.decode(node, local_rows, rx)
