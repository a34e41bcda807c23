import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from coopwsn.channel import ChannelModel, LinkSpec
from coopwsn.codecs import crc4_append, crc4_check
from coopwsn.cooperation import (
    CHUNK_ROWS,
    CheckReceiver,
    Fault,
    SignalSet,
    Topology,
    combine_signals,
    per_dt,
    per_link,
    per_mrc,
    per_src,
    send_link,
    simulate_frame,
    transport,
)
from coopwsn.error_control.engine import LinkStats
from coopwsn.modem import ModulationSpec
from coopwsn.streams import StreamFactory

GRID = [i / 10 for i in range(11)]


def crc_receiver(payload_bits):
    return CheckReceiver(crc4_check, payload_bits)


def noiseless(kind):
    # huge transmit power: every link is effectively error free
    return Topology.from_geometry(kind, tx_power=1e15)


class TestClosedForms:
    def test_examples(self):
        assert per_link(0.0, 80, 2) == 0.0
        assert per_link(1.0, 8, 2) == 1.0
        assert per_link(0.5, 8, 2) == 0.9375
        assert [per_dt(v) for v in (0, 1, 0.22)] == [0, 1, 0.22]
        assert per_src(0.0, 0.7, 0.9) == 0.0
        assert per_src(1.0, 1.0, 0.4) == 1.0
        assert per_src(0.5, 0.2, 0.3) == 0.22
        assert per_mrc(0.0, 0.3, 0.3, 0.5, 0.5) == 0.0
        assert per_mrc(0.5, 0.2, 0.2, 0.3, 0.3) == 0.0632

    def test_per_link_rejects(self):
        with pytest.raises(ValueError):
            per_link(0.1, 0, 2)
        with pytest.raises(ValueError):
            per_link(0.1, 7, 2)
        with pytest.raises(ValueError):
            per_link(1.5, 8, 2)

    def test_dominance_on_grid(self):
        a, b, c, d, e = np.meshgrid(*[GRID] * 5, indexing="ij")
        assert np.all(per_mrc(a, b, c, d, e) <= a + 1e-15)
        for a, b, c in itertools.product(GRID, repeat=3):
            s = per_src(a, b, c)
            assert s <= a + 1e-15
            assert per_mrc(a, b, b, c, c) <= s + 1e-15

    def test_ordering_example(self):
        assert per_mrc(0.5, 0.2, 0.2, 0.3, 0.3) <= per_src(0.5, 0.2, 0.3) <= per_dt(0.5)


class TestCombine:
    def test_examples(self):
        y = np.arange(4.0)
        assert np.array_equal(combine_signals(SignalSet(y)), y)
        assert np.array_equal(combine_signals(SignalSet(y, np.zeros(4), np.zeros(4))), y)
        ones = np.ones(4)
        assert np.array_equal(combine_signals(SignalSet(ones, ones, ones)), 3 * ones)

    def test_rejects(self):
        with pytest.raises(ValueError):
            combine_signals(SignalSet(np.ones(3), np.ones(4)))
        with pytest.raises(ValueError):
            combine_signals(SignalSet(None, np.ones(3)))

    @given(
        arrays(np.float64, 6, elements=st.floats(-1e3, 1e3)),
        arrays(np.float64, 6, elements=st.floats(-1e3, 1e3)),
        arrays(np.float64, 6, elements=st.floats(-1e3, 1e3)),
    )
    def test_commutative_and_associative(self, a, b, c):
        abc = combine_signals(SignalSet(a, b, c))
        assert np.allclose(abc, combine_signals(SignalSet(c, a, b)))
        assert np.allclose(abc, combine_signals(SignalSet(combine_signals(SignalSet(a, b)), c)))


class TestTopology:
    def test_link_counts(self):
        sd = LinkSpec(1.0)
        with pytest.raises(ValueError):
            Topology("src", sd)
        with pytest.raises(ValueError):
            Topology("mrc", sd, (sd,), (sd,))
        with pytest.raises(ValueError):
            Topology("star", sd)
        assert Topology.mrc(sd, [sd, sd], [sd, sd]).n_relays == 2

    def test_geometry(self):
        top = Topology.from_geometry("src", distance=2.0, relays=[(0.5, 0.0)])
        assert top.link_sr[0].distance == pytest.approx(1.0)
        assert top.link_rd[0].distance == pytest.approx(1.0)
        s = top.sigmas()
        assert s["sr1"] == pytest.approx(4 * s["sd"])
        with pytest.raises(ValueError):
            Topology.from_geometry("mrc", relays=[(0.5, 0.5)])


class TestSimulateFrame:
    def setup_method(self):
        rng = np.random.default_rng(0)
        self.payload = rng.integers(0, 2, 20, dtype=np.uint8)
        self.frame = crc4_append(self.payload)
        self.rx = crc_receiver(20)

    def test_noiseless_direct_success(self):
        for kind in ("dt", "src", "mrc"):
            out = simulate_frame(noiseless(kind), self.frame, self.rx, 3)
            assert out.event_class == 1 and out.delivered and out.sd_ok
            assert np.array_equal(out.payload, self.payload)
            assert not any(out.relay_forwarded)

    def test_forced_sd_failure_uses_relay(self):
        for kind in ("src", "mrc"):
            out = simulate_frame(noiseless(kind), self.frame, self.rx, 3, faults={"sd": Fault.FLIP})
            assert out.event_class == 3 and out.delivered and not out.sd_ok
            assert np.array_equal(out.payload, self.payload)

    def test_all_broadcast_links_fail(self):
        out = simulate_frame(
            noiseless("mrc"), self.frame, self.rx, 3,
            faults={"sd": Fault.LOSE, "sr1": Fault.FLIP, "sr2": Fault.LOSE},
        )
        assert out.event_class == 2 and not out.delivered

    def test_peer_copy_when_one_relay_misses(self):
        out = simulate_frame(
            noiseless("mrc"), self.frame, self.rx, 3,
            faults={"sd": Fault.FLIP, "sr1": Fault.LOSE, "r2d": Fault.LOSE},
        )
        assert out.relay_ok == (False, True)
        assert out.relay_forwarded == (True, True)
        assert out.delivered and np.array_equal(out.payload, self.payload)

    def test_zero_snr_is_total_failure(self):
        top = Topology.from_geometry("src", tx_power=0.0)
        frames = np.tile(self.frame, (2000, 1))
        res = transport(top, frames, self.rx, StreamFactory(1))
        # with no signal only CRC false accepts get through (about 1 in 16)
        assert np.mean(res.event == 2) > 0.85
        assert np.mean(res.ok) < 0.15

    def test_combining_choice_validated(self):
        with pytest.raises(ValueError):
            simulate_frame(noiseless("dt"), self.frame, self.rx, 0, combining="max")


class TestTransport:
    def test_independent_of_batching(self):
        top = Topology.from_geometry("mrc", tx_power=10.0)
        rng = np.random.default_rng(2)
        frames = crc4_append(rng.integers(0, 2, size=(3 * CHUNK_ROWS + 7, 40), dtype=np.uint8))
        rows = np.arange(len(frames))
        rx = crc_receiver(40)
        whole = transport(top, frames, rx, StreamFactory(9), rows)
        perm = rng.permutation(len(frames))
        part = [transport(top, frames[perm[s]], rx, StreamFactory(9), rows[perm[s]])
                for s in (slice(0, 300), slice(300, None))]
        ok = np.empty(len(frames), bool)
        ok[perm[:300]] = part[0].ok
        ok[perm[300:]] = part[1].ok
        assert np.array_equal(ok, whole.ok)

    def test_common_sd_channel_across_topologies(self):
        frames = crc4_append(np.zeros((500, 40), np.uint8))
        rx = crc_receiver(40)
        res = [transport(Topology.from_geometry(k, tx_power=5.0), frames, rx, StreamFactory(4)) for k in ("dt", "src", "mrc")]
        assert np.array_equal(res[0].sd_ok, res[1].sd_ok)
        assert np.array_equal(res[0].sd_ok, res[2].sd_ok)

    def test_ideal_link(self):
        bits = np.ones((5, 12), np.uint8)
        out, lost = send_link("ds", 1.0, bits, StreamFactory(0), channel=None)
        assert np.array_equal(out, bits) and not lost.any()
        flip = np.array([Fault.FLIP, Fault.LOSE, Fault.CLEAN, Fault.BURST, Fault.CHANNEL])
        out, lost = send_link("ds", 1.0, bits, StreamFactory(0), channel=None, faults=flip)
        assert lost.tolist() == [False, True, False, False, False]
        assert (out != bits).sum(axis=1)[[0, 2, 4]].tolist() == [1, 0, 0]
        assert 2 <= (out[3] != bits[3]).sum() <= 4

    @pytest.mark.parametrize("kind, link_names", [("src", ("sr1", "r1d")), ("mrc", ("sr1", "sr2", "r1d", "r2d"))])
    def test_self_consistency_with_closed_form(self, kind, link_names):
        # measured end-to-end failure vs the closed form fed with measured link PERs
        top = Topology.from_geometry(kind, tx_power=8.0)
        rng = np.random.default_rng(6)
        n = 20_000
        frames = crc4_append(rng.integers(0, 2, size=(n, 60), dtype=np.uint8))
        res = transport(top, frames, crc_receiver(60), StreamFactory(5), combining="selection")
        stats = LinkStats(top.n_relays)
        stats.add(res)
        p_sd = stats.sd_fail / stats.sd_n
        p_sr = stats.sr_fail / stats.sr_n
        p_rd = stats.rd_fail / stats.rd_n
        if kind == "src":
            model = per_src(p_sd, p_sr[0], p_rd[0])
        else:
            model = per_mrc(p_sd, p_sr[0], p_sr[1], p_rd[0], p_rd[1])
        measured = stats.e2e_fail / stats.e2e_n
        se = np.sqrt(model * (1 - model) / n)
        assert abs(measured - model) < 3 * se
