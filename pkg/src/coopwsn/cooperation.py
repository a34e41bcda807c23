"""
Direct, single-relay and two-relay transmission.

The closed-form part composes per-link packet error rates into end-to-end
ones.  The simulation part moves a batch of frames through a topology with
decode-and-forward relays:

1. the source broadcasts; the destination and every relay observe the frame
   over their own independently block-faded links;
2. if the destination's check fails and at least one relay decoded, the
   relays forward their re-encoded copy in separate slots;
3. the destination either sums the raw observations (``combining="sum"``)
   or decodes every copy on its own and keeps the first that checks
   (``combining="selection"``).

Each frame ends in one of three event classes: 1 direct success, 2 no relay
could help (total failure), 3 relay phase.  In the two-relay case both relays
transmit during the relay phase; a relay that missed the broadcast takes its
peer's copy over an error-free relay-to-relay exchange.

Random draws come from :class:`coopwsn.streams.StreamFactory` keyed by
``(link, purpose, kind, chunk)`` where ``chunk`` groups ``CHUNK_ROWS``
consecutive global frame indices.  A frame's noise therefore depends only on
its own index, never on batch size, relay usage of other frames or worker
count, and the same frame sees the same S-D channel under every topology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Protocol

import numpy as np
from scipy.special import ndtr, ndtri

from .channel import (
    ChannelModel,
    LinkSpec,
    average_snr,
    flip_bits,
    inject_frame_errors,
    inject_symbol_errors,
)
from .modem import ModulationSpec, demap_symbols, map_symbols
from .streams import LINK_IDS, StreamFactory, as_streams

__all__ = [
    "TOPOLOGY_KINDS",
    "COMBINERS",
    "CHUNK_ROWS",
    "Fault",
    "Topology",
    "SignalSet",
    "combine_signals",
    "per_link",
    "per_dt",
    "per_src",
    "per_mrc",
    "Receiver",
    "TransportResult",
    "transport",
    "send_link",
    "FrameOutcome",
    "simulate_frame",
    "CheckReceiver",
]

TOPOLOGY_KINDS = ("dt", "src", "mrc")
COMBINERS = ("sum", "selection")
CHUNK_ROWS = 256

# stream purposes
_FADE, _NOISE, _INJECT, _FAULT = 0, 1, 2, 3


class Fault:
    """Per-link override codes of a fault plan."""

    CHANNEL = 0  # the channel model decides
    CLEAN = 1    # delivered without error
    LOSE = 2     # frame never arrives
    FLIP = 3     # one random bit flipped
    BURST = 4    # burst of 2..4 bits, first and last flipped


# --------------------------------------------------------------------------
# topology


@dataclass(frozen=True)
class Topology:
    """Links of a DT, SRC or MRC arrangement.

    ``link_sr[i]`` and ``link_rd[i]`` are the source-to-relay and
    relay-to-destination links of relay ``i``.
    """

    kind: str
    link_sd: LinkSpec
    link_sr: tuple = ()
    link_rd: tuple = ()

    def __post_init__(self):
        if self.kind not in TOPOLOGY_KINDS:
            raise ValueError(f"topology must be one of {TOPOLOGY_KINDS}, got {self.kind!r}")
        object.__setattr__(self, "link_sr", tuple(self.link_sr))
        object.__setattr__(self, "link_rd", tuple(self.link_rd))
        need = {"dt": 0, "src": 1, "mrc": 2}[self.kind]
        if len(self.link_sr) != need or len(self.link_rd) != need:
            raise ValueError(
                f"{self.kind} needs {need} S-R and {need} R-D links, "
                f"got {len(self.link_sr)} and {len(self.link_rd)}"
            )

    @classmethod
    def dt(cls, sd: LinkSpec) -> "Topology":
        return cls("dt", sd)

    @classmethod
    def src(cls, sd: LinkSpec, sr: LinkSpec, rd: LinkSpec) -> "Topology":
        return cls("src", sd, (sr,), (rd,))

    @classmethod
    def mrc(cls, sd: LinkSpec, sr, rd) -> "Topology":
        return cls("mrc", sd, tuple(sr), tuple(rd))

    @classmethod
    def from_geometry(
        cls,
        kind: str,
        distance: float = 1.0,
        relays=((0.5, 0.5), (0.5, -0.5)),
        path_loss_exponent: float = 2.0,
        tx_power: float = 1.0,
        noise_power: float = 1.0,
    ) -> "Topology":
        """Source at the origin, destination at ``(distance, 0)``.

        `relays` are ``(x, y)`` positions in units of `distance`; the first
        one (SRC) or two (MRC) are used.
        """
        if kind not in TOPOLOGY_KINDS:
            raise ValueError(f"topology must be one of {TOPOLOGY_KINDS}, got {kind!r}")

        def link(d):
            return LinkSpec(d, path_loss_exponent, tx_power, noise_power)

        n = {"dt": 0, "src": 1, "mrc": 2}[kind]
        relays = [tuple(map(float, p)) for p in relays]
        if len(relays) < n:
            raise ValueError(f"{kind} needs {n} relay positions, got {len(relays)}")
        sr, rd = [], []
        for x, y in relays[:n]:
            sr.append(link(distance * math.hypot(x, y)))
            rd.append(link(distance * math.hypot(1.0 - x, y)))
        return cls(kind, link(distance), tuple(sr), tuple(rd))

    @property
    def n_relays(self) -> int:
        return len(self.link_sr)

    def links(self):
        return (self.link_sd,) + self.link_sr + self.link_rd

    def with_tx_power(self, tx_power: float) -> "Topology":
        return replace(
            self,
            link_sd=self.link_sd.with_tx_power(tx_power),
            link_sr=tuple(lk.with_tx_power(tx_power) for lk in self.link_sr),
            link_rd=tuple(lk.with_tx_power(tx_power) for lk in self.link_rd),
        )

    def scaled(self, factor: float) -> "Topology":
        return replace(
            self,
            link_sd=self.link_sd.scaled(factor),
            link_sr=tuple(lk.scaled(factor) for lk in self.link_sr),
            link_rd=tuple(lk.scaled(factor) for lk in self.link_rd),
        )

    def as_kind(self, kind: str) -> "Topology":
        """Same geometry restricted to (or extended with) relays for `kind`.

        Only narrowing is possible: MRC -> SRC -> DT keep the first relays.
        """
        n = {"dt": 0, "src": 1, "mrc": 2}[kind]
        if n > self.n_relays:
            raise ValueError(f"cannot build {kind} from a {self.kind} topology")
        return Topology(kind, self.link_sd, self.link_sr[:n], self.link_rd[:n])

    def sigmas(self) -> dict:
        """Average SNR per named link; ``ds`` is the reverse of ``sd``."""
        out = {"sd": average_snr(self.link_sd), "ds": average_snr(self.link_sd)}
        for i, (sr, rd) in enumerate(zip(self.link_sr, self.link_rd), start=1):
            out[f"sr{i}"] = average_snr(sr)
            out[f"r{i}d"] = average_snr(rd)
        return out


# --------------------------------------------------------------------------
# closed forms


def _check_p(name, p):
    arr = np.asarray(p, dtype=float)
    if np.any((arr < 0) | (arr > 1)) or np.any(np.isnan(arr)):
        raise ValueError(f"{name} must lie in [0, 1]")
    return p


def per_link(ser, frame_bits: int, bits_per_symbol: int):
    """Packet error rate of an ``L``-bit frame, ``1 - (1 - ser)**(L/b)``."""
    if frame_bits <= 0:
        raise ValueError(f"frame length must be > 0, got {frame_bits}")
    if bits_per_symbol <= 0:
        raise ValueError("bits_per_symbol must be > 0")
    if frame_bits % bits_per_symbol:
        raise ValueError(f"frame of {frame_bits} bits is not a whole number of {bits_per_symbol}-bit symbols")
    _check_p("ser", ser)
    n_sym = frame_bits // bits_per_symbol
    out = 1.0 - (1.0 - np.asarray(ser, dtype=float)) ** n_sym
    return float(out) if out.ndim == 0 else out


def per_dt(per_sd):
    _check_p("per_sd", per_sd)
    return per_sd


def per_src(per_sd, per_sr, per_rd):
    """The frame is lost when S-D fails and the relay either missed the
    broadcast or its forwarded copy failed too."""
    for name, p in (("per_sd", per_sd), ("per_sr", per_sr), ("per_rd", per_rd)):
        _check_p(name, p)
    return per_sd * per_sr + per_sd * (1 - per_sr) * per_rd


def per_mrc(per_sd, per_sr1, per_sr2, per_r1d, per_r2d):
    """Two relays: lost when S-D fails and either both relays missed the
    broadcast or both forwarded copies failed."""
    for name, p in (
        ("per_sd", per_sd),
        ("per_sr1", per_sr1),
        ("per_sr2", per_sr2),
        ("per_r1d", per_r1d),
        ("per_r2d", per_r2d),
    ):
        _check_p(name, p)
    both_sr = per_sr1 * per_sr2
    return per_sd * both_sr + per_sd * (1 - both_sr) * per_r1d * per_r2d


# --------------------------------------------------------------------------
# observations


@dataclass
class SignalSet:
    """Raw per-path observations at the destination; absent paths are None."""

    y_sd: np.ndarray
    y_sr1: np.ndarray | None = None
    y_sr2: np.ndarray | None = None

    def present(self):
        return [y for y in (self.y_sd, self.y_sr1, self.y_sr2) if y is not None]


def combine_signals(signals: SignalSet) -> np.ndarray:
    """Element-wise sum of every present observation (no weighting)."""
    if signals.y_sd is None:
        raise ValueError("the direct-path observation is required")
    parts = [np.asarray(y) for y in signals.present()]
    shape = parts[0].shape
    for y in parts[1:]:
        if y.shape != shape:
            raise ValueError(f"observation shapes differ: {shape} vs {y.shape}")
    out = parts[0].copy() if np.iscomplexobj(parts[0]) else parts[0].astype(np.result_type(*parts))
    for y in parts[1:]:
        out = out + y
    return out


# --------------------------------------------------------------------------
# batched transport


class Receiver(Protocol):
    """Decode hook used by :func:`transport`.

    ``decode(node, rows, rx_bits)`` is called with ``node`` in
    ``{"d", "r1", "r2"}``, the global frame indices being decoded and the
    hard bits received for them.  It returns ``(ok, tx_bits, payload)``:
    the node's check verdict, the transmitted frame as reconstructed by the
    node (what a relay forwards) and the node's payload estimate.
    Implementations may keep per-frame state across calls.
    """

    def decode(self, node: str, rows: np.ndarray, rx_bits: np.ndarray): ...


class CheckReceiver:
    """Stateless hook for a frame that is its own check: bits pass as is.

    `check` maps received frames ``(rows, L)`` to a boolean verdict; the
    payload estimate is the first `payload_bits` bits.
    """

    def __init__(self, check, payload_bits: int):
        self.check = check
        self.payload_bits = payload_bits

    def decode(self, node, rows, rx_bits):
        ok = np.asarray(self.check(rx_bits), dtype=bool).reshape(len(rows))
        return ok, rx_bits, rx_bits[:, : self.payload_bits]


def _chunked(streams: StreamFactory, key, rows, draw):
    """Draw per-row samples keyed by chunk of global row index.

    `draw(gen, n)` must return an array whose first axis has length ``n``
    (one entry per row of a whole chunk).
    """
    rows = np.asarray(rows, dtype=np.int64)
    if rows.size == 0:
        return draw(streams.generator(*key, 0), 0)
    order = np.argsort(rows, kind="stable")
    srt = rows[order]
    chunks = srt // CHUNK_ROWS
    starts = np.flatnonzero(np.r_[True, chunks[1:] != chunks[:-1]])
    ends = np.r_[starts[1:], len(srt)]
    out = None
    for a, e in zip(starts, ends):
        c = int(chunks[a])
        block = draw(streams.generator(*key, c), CHUNK_ROWS)
        if out is None:
            out = np.empty((len(rows),) + block.shape[1:], dtype=block.dtype)
        out[order[a:e]] = block[srt[a:e] - c * CHUNK_ROWS]
    return out


@dataclass
class TransportResult:
    """Outcome of one transmission round for a batch of frames.

    All arrays are indexed like the `rows` passed to :func:`transport`.
    ``sr_ok`` / ``rd_tx`` / ``rd_ok`` have one column per relay; ``rd_ok``
    is only meaningful where ``rd_checked``.
    """

    heard: np.ndarray
    ok: np.ndarray
    payload: np.ndarray
    event: np.ndarray
    sd_heard: np.ndarray
    sd_ok: np.ndarray
    sr_heard: np.ndarray
    sr_ok: np.ndarray
    rd_tx: np.ndarray
    rd_ok: np.ndarray
    rd_checked: np.ndarray

    @property
    def relay_transmissions(self) -> np.ndarray:
        return self.rd_tx.sum(axis=1)


class _RawObservation:
    def __init__(self, y):
        self.y = y

    def take(self, idx=slice(None)):
        return self.y[idx]


class _QpskObservation:
    """Raw QPSK samples rebuilt from the uniforms that decided the bits."""

    def __init__(self, bits, sg, u):
        self.bits, self.sg, self.u = bits, sg, u

    def take(self, idx=slice(None)):
        bits, sg, u = self.bits[idx], self.sg[idx], self.u[idx]
        x = map_symbols(bits, ModulationSpec(4))
        tail = -ndtri(np.maximum(u, np.finfo(float).tiny))
        sign = np.empty(u.shape)
        sign[:, 0::2] = np.sign(x.real)
        sign[:, 1::2] = np.sign(x.imag)
        n = -sign * tail * math.sqrt(0.5)
        return sg[:, None] * x + (n[:, 0::2] + 1j * n[:, 1::2])


class _Link:
    """Per-link channel realisation for a set of rows."""

    def __init__(self, name, sigma, channel, mod, streams, kind):
        self.name = name
        self.lid = LINK_IDS[name]
        self.sigma = sigma
        self.channel = channel
        self.b = mod.bits_per_symbol
        self.mod = mod
        self.streams = streams
        self.kind = kind

    def gamma(self, rows):
        if self.channel.kind == "awgn":
            return np.full(len(rows), self.sigma)
        if self.sigma == 0:
            return np.zeros(len(rows))
        e = _chunked(self.streams, (self.lid, _FADE), rows, lambda g, n: g.exponential(1.0, n))
        return self.sigma * e

    def send(self, rows, bits):
        """Returns (raw observation or None, sqrt gamma or None, hard bits).

        The observation is an object whose ``take(idx)`` gives the equalisable
        samples ``sqrt(gamma) x + n`` of the selected rows.
        """
        nbits = bits.shape[1]
        if not self.channel.soft:
            p = self.channel.error_rate
            kind = self.channel.kind
            b = self.b

            def mask(g, n):
                z = np.zeros((n, nbits), dtype=np.uint8)
                if kind == "bit_flip":
                    return flip_bits(z, p, g)
                if kind == "symbol_error":
                    return inject_symbol_errors(z, b, p, g)
                return inject_frame_errors(z, p, g)

            m = _chunked(self.streams, (self.lid, _INJECT, self.kind, nbits), rows, mask)
            return None, None, bits ^ m
        g2 = self.gamma(rows)
        sg = np.sqrt(g2)
        if self.b == 2:
            # Gray QPSK: each bit owns one axis and flips with Q(sqrt(gamma));
            # the Gaussian noise is rebuilt from the same uniforms on demand
            u = _chunked(
                self.streams,
                (self.lid, _NOISE, self.kind, nbits, 2),
                rows,
                lambda g, n: g.random((n, nbits)),
            )
            flips = (u < ndtr(-sg)[:, None]).astype(np.uint8)
            return _QpskObservation(bits, sg, u), sg, bits ^ flips
        x = map_symbols(bits, self.mod)
        nsym = x.shape[1]
        noise = _chunked(
            self.streams,
            (self.lid, _NOISE, self.kind, nsym),
            rows,
            lambda g, n: g.standard_normal((n, 2, nsym)),
        )
        n = (noise[:, 0] + 1j * noise[:, 1]) * math.sqrt(0.5)
        y = sg[:, None] * x + n
        return _RawObservation(y), sg, self.demap(y, sg)

    def demap(self, y, sg):
        with np.errstate(divide="ignore", invalid="ignore"):
            eq = np.where(sg[:, None] > 0, y / sg[:, None], y)
        return demap_symbols(eq, self.mod)


def _apply_faults(rows, bits, codes, streams, lid, kind):
    """Override hard bits per fault code; returns (bits, lost mask)."""
    if codes is None:
        return bits, np.zeros(len(rows), dtype=bool)
    codes = np.asarray(codes)
    lost = codes == Fault.LOSE
    nbits = bits.shape[1]
    hit = np.nonzero((codes == Fault.FLIP) | (codes == Fault.BURST))[0]
    if hit.size:
        bits = bits.copy()

        def draw(g, n):
            return np.stack(
                [g.integers(0, nbits, n), g.integers(2, 5, n), g.integers(0, 4, n)],
                axis=1,
            )

        params = _chunked(streams, (lid, _FAULT, kind, nbits), rows[hit], draw)
        for j, i in enumerate(hit):
            start, length, inner = (int(v) for v in params[j])
            if codes[i] == Fault.FLIP:
                bits[i, start] ^= 1
                continue
            length = min(length, nbits)
            start = min(start, nbits - length)
            pat = np.zeros(length, dtype=np.uint8)
            pat[0] = pat[-1] = 1
            for k in range(1, length - 1):
                pat[k] = (inner >> (k - 1)) & 1
            bits[i, start : start + length] ^= pat
    return bits, lost


def _pad(bits, b):
    extra = (-bits.shape[1]) % b
    if extra:
        bits = np.concatenate([bits, np.zeros((bits.shape[0], extra), dtype=np.uint8)], axis=1)
    return bits, extra


def send_link(
    name: str,
    sigma: float,
    bits,
    streams,
    rows=None,
    *,
    channel: ChannelModel | None = ChannelModel(),
    modulation: ModulationSpec = ModulationSpec(4),
    kind: int = 0,
    faults=None,
):
    """Send hard bits over one named link; returns ``(received bits, lost)``.

    ``channel=None`` is an error-free link (fault codes still apply).
    """
    streams = as_streams(streams)
    bits = np.asarray(bits, dtype=np.uint8)
    rows = np.arange(bits.shape[0]) if rows is None else np.asarray(rows, dtype=np.int64)
    L = bits.shape[1]
    if channel is None:
        return _apply_faults(rows, bits, faults, streams, LINK_IDS[name], kind)
    padded, _ = _pad(bits, modulation.bits_per_symbol)
    lk = _Link(name, sigma, channel, modulation, streams, kind)
    _, _, hard = lk.send(rows, padded)
    hard = hard[:, :L]
    return _apply_faults(rows, hard, faults, streams, lk.lid, kind)


def transport(
    topology: Topology,
    tx_bits,
    receiver: Receiver,
    streams,
    rows=None,
    *,
    channel: ChannelModel = ChannelModel(),
    modulation: ModulationSpec = ModulationSpec(4),
    kind: int = 0,
    combining: str = "sum",
    faults: dict | None = None,
) -> TransportResult:
    """Move one frame per row through `topology`.

    Parameters
    ----------
    tx_bits : ndarray, shape ``(rows, L)``
        Frames sent by the source.
    receiver : Receiver
        Decode hook for the destination and relays.
    streams : StreamFactory, int or Generator
        Random streams, already bound to the round being simulated.
    rows : ndarray of int, optional
        Global frame indices (keys of the random streams); default
        ``arange(len(tx_bits))``.
    kind : int
        Attempt kind, part of the stream key so frames of different length
        in the same round draw independent noise.
    combining : {"sum", "selection"}
        Destination combiner for soft channels.  Hard injection channels
        and fault plans always use selection.
    faults : dict, optional
        Link name -> fault code per row (see :class:`Fault`).
    """
    if combining not in COMBINERS:
        raise ValueError(f"combining must be one of {COMBINERS}, got {combining!r}")
    streams = as_streams(streams)
    tx = np.asarray(tx_bits, dtype=np.uint8)
    if tx.ndim != 2 or tx.shape[1] == 0:
        raise ValueError("tx_bits must be a non-empty (rows, bits) array")
    n_rows, L = tx.shape
    rows = np.arange(n_rows) if rows is None else np.asarray(rows, dtype=np.int64)
    if rows.shape != (n_rows,):
        raise ValueError("rows must give one index per frame")
    faults = faults or {}
    sig = topology.sigmas()
    b = modulation.bits_per_symbol
    soft = channel.soft
    use_sum = soft and combining == "sum" and not faults
    nr = topology.n_relays

    def link(name):
        return _Link(name, sig[name], channel, modulation, streams, kind)

    txp, extra = _pad(tx, b)

    def received(name, sel, bits):
        lk = link(name)
        y, sg, hard = lk.send(rows[sel], bits)
        if extra:
            hard = hard[:, :L]
        hard, lost = _apply_faults(
            rows[sel], hard, None if name not in faults else np.asarray(faults[name])[sel], streams, lk.lid, kind
        )
        return y, sg, hard, lost

    everyone = np.arange(n_rows)
    y_sd, sg_sd, bits_sd, lost_sd = received("sd", everyone, txp)
    sd_heard = ~lost_sd
    ok = np.zeros(n_rows, dtype=bool)
    payload = None
    heard_rows = np.nonzero(sd_heard)[0]
    if heard_rows.size:
        okd, _, pl = receiver.decode("d", rows[heard_rows], bits_sd[heard_rows])
        ok[heard_rows] = okd
        payload = np.zeros((n_rows, pl.shape[1]), dtype=np.uint8)
        payload[heard_rows] = pl
    sd_ok = ok.copy()

    sr_heard = np.zeros((n_rows, nr), dtype=bool)
    sr_ok = np.zeros((n_rows, nr), dtype=bool)
    rd_tx = np.zeros((n_rows, nr), dtype=bool)
    rd_ok = np.zeros((n_rows, nr), dtype=bool)
    rd_checked = np.zeros((n_rows, nr), dtype=bool)
    event = np.where(ok, 1, 2).astype(np.int8)

    need = np.nonzero(~ok)[0]
    if nr and need.size:
        recon = np.zeros((n_rows, nr, L), dtype=np.uint8)
        for i in range(nr):
            _, _, bits_sr, lost_sr = received(f"sr{i + 1}", need, txp[need])
            heard = need[~lost_sr]
            sr_heard[heard, i] = True
            if heard.size:
                okr, rec, _ = receiver.decode(f"r{i + 1}", rows[heard], bits_sr[~lost_sr])
                sr_ok[heard, i] = okr
                recon[heard, i] = rec
        any_ok = sr_ok.any(axis=1)
        phase = need[any_ok[need]]
        if phase.size:
            event[phase] = 3
            if nr == 1:
                rd_tx[phase, 0] = True
            else:
                rd_tx[phase, :] = True
                # a relay that missed the broadcast takes its peer's copy
                for i, j in ((0, 1), (1, 0)):
                    fix = phase[~sr_ok[phase, i]]
                    recon[fix, i] = recon[fix, j]
            obs = []
            for i in range(nr):
                rsel = phase[rd_tx[phase, i]]
                send = recon[rsel, i]
                sendp, _ = _pad(send, b)
                y, sg, hard, lost = received(f"r{i + 1}d", rsel, sendp)
                obs.append((rsel, y, sg, hard, lost))
            if use_sum:
                y = y_sd.take(phase).copy()
                sg = sg_sd[phase].copy()
                for rsel, yi, sgi, _, _ in obs:
                    idx = np.searchsorted(phase, rsel)
                    y[idx] += yi.take()
                    sg[idx] += sgi
                hard = link("sd").demap(y, sg)
                if extra:
                    hard = hard[:, :L]
                okc, _, pl = receiver.decode("d", rows[phase], hard)
                ok[phase] = okc
                if payload is None:
                    payload = np.zeros((n_rows, pl.shape[1]), dtype=np.uint8)
                payload[phase] = pl
            else:
                done = np.zeros(n_rows, dtype=bool)
                for i, (rsel, _, _, hard, lost) in enumerate(obs):
                    got = ~lost
                    sel = rsel[got]
                    if sel.size == 0:
                        continue
                    okc, _, pl = receiver.decode("d", rows[sel], hard[got])
                    rd_checked[sel, i] = True
                    rd_ok[sel, i] = okc
                    if payload is None:
                        payload = np.zeros((n_rows, pl.shape[1]), dtype=np.uint8)
                    # keep the first copy that checks; otherwise the latest attempt
                    take = ~done[sel]
                    payload[sel[take]] = pl[take]
                    newly = sel[okc & take]
                    done[newly] = True
                    ok[newly] = True
    heard = sd_heard | rd_tx.any(axis=1)
    if payload is None:
        payload = np.zeros((n_rows, 0), dtype=np.uint8)
    return TransportResult(
        heard=heard,
        ok=ok,
        payload=payload,
        event=event,
        sd_heard=sd_heard,
        sd_ok=sd_ok,
        sr_heard=sr_heard,
        sr_ok=sr_ok,
        rd_tx=rd_tx,
        rd_ok=rd_ok,
        rd_checked=rd_checked,
    )


# --------------------------------------------------------------------------
# single frame


@dataclass(frozen=True)
class FrameOutcome:
    """What happened to one frame."""

    event_class: int
    delivered: bool
    payload: np.ndarray
    sd_ok: bool
    relay_ok: tuple = field(default_factory=tuple)
    relay_forwarded: tuple = field(default_factory=tuple)


def simulate_frame(
    topology: Topology,
    frame_bits,
    decode_hook,
    rng,
    *,
    channel: ChannelModel = ChannelModel(),
    modulation: ModulationSpec = ModulationSpec(4),
    combining: str = "sum",
    faults: dict | None = None,
) -> FrameOutcome:
    """Send a single frame; `decode_hook` follows the :class:`Receiver` protocol.

    `faults` maps link names to a single :class:`Fault` code.
    """
    bits = np.asarray(frame_bits, dtype=np.uint8).reshape(1, -1)
    plan = None if faults is None else {k: np.array([v]) for k, v in faults.items()}
    res = transport(
        topology,
        bits,
        decode_hook,
        rng,
        channel=channel,
        modulation=modulation,
        combining=combining,
        faults=plan,
    )
    return FrameOutcome(
        event_class=int(res.event[0]),
        delivered=bool(res.ok[0]),
        payload=res.payload[0],
        sd_ok=bool(res.sd_ok[0]),
        relay_ok=tuple(bool(v) for v in res.sr_ok[0]),
        relay_forwarded=tuple(bool(v) for v in res.rd_tx[0]),
    )
