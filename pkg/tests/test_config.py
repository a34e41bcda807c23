import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coopwsn.codecs import CodeSpec
from coopwsn.config import SCHEMA, ConfigError, emit_config, load_config, parse_config
from coopwsn.error_control import Strategy

ARQ = """
# stop-and-wait over one relay
[topology]
kind = src
distance = 2.0

[protocol]
strategy = arq
detector = crc4   # trailing comment

[sweep]
variable = ber
points = logspace -4 -1 4
trials = 500
seed = 7
"""


class TestParse:
    def test_defaults(self):
        cfg = parse_config("")
        assert cfg.get("protocol", "strategy") == "fec"
        assert cfg.get("protocol", "detector") == "none"
        assert cfg.get("energy", "beta") == 0.5
        assert cfg.scenario.trials_per_point == 100_000
        assert cfg.output == "-" and cfg.delimiter == ","

    def test_sections(self):
        cfg = parse_config(ARQ)
        sc = cfg.scenario
        assert sc.topology.kind == "src"
        assert sc.topology.link_sd.distance == 2.0
        assert sc.protocol.strategy is Strategy.SW_ARQ
        assert sc.sweep_points == pytest.approx((1e-4, 1e-3, 1e-2, 1e-1))
        assert sc.master_seed == 7 and sc.trials_per_point == 500

    def test_shorthands(self):
        cfg = parse_config("topology = mrc\nstrategy = harq2\ncode = hamming74\ndetector = crc4\nbeta = 0.3\n")
        assert cfg.scenario.topology.kind == "mrc"
        assert cfg.scenario.protocol.strategy is Strategy.HARQ_T2
        assert cfg.scenario.energy.amplifier_loss == 0.3

    def test_code_sweep(self):
        cfg = parse_config("[sweep]\nvariable = code\npoints = rs 31 21; hamming74\n")
        assert cfg.scenario.sweep_points == (CodeSpec.rs(31, 21).label(), CodeSpec.hamming74().label())

    def test_linspace(self):
        cfg = parse_config("[sweep]\npoints = linspace 0 30 31\n")
        assert cfg.scenario.sweep_points[0] == 0.0 and cfg.scenario.sweep_points[-1] == 30.0
        assert len(cfg.scenario.sweep_points) == 31

    def test_tsv(self):
        assert parse_config("[output]\nformat = tsv\n").delimiter == "\t"

    def test_hash_in_value_kept(self):
        cfg = parse_config("[output]\npath = out#1.csv\n")
        assert cfg.output == "out#1.csv"


class TestErrors:
    @pytest.mark.parametrize(
        "text, line, key",
        [
            ("[nosuch]\n", 1, None),
            ("[sweep\n", 1, None),
            ("\n[sweep]\nfoo = 1\n", 3, "sweep.foo"),
            ("[sweep]\ntrials\n", 2, None),
            ("[sweep]\ntrials = \n", 2, "sweep.trials"),
            ("[sweep]\ntrials = ten\n", 2, "sweep.trials"),
            ("[sweep]\ntrials = 1\ntrials = 2\n", 3, "sweep.trials"),
            ("bogus = 1\n", 1, None),
            ("[energy]\nbeta = 1.0\n", 2, "energy.beta"),
            ("[energy]\nbeta = 0\n", 2, "energy.beta"),
            ("[channel]\nkind = rician\n", 2, "channel.kind"),
            ("strategy = arq\n", None, "protocol.detector"),
            ("strategy = harq1\ndetector = crc4\n", None, "protocol.code"),
            ("strategy = arq\ndetector = crc4\ncode = hamming74\n", None, "protocol.code"),
            ("[sweep]\npoints = 1 3 2\n", None, "sweep.points"),
            ("[sweep]\nvariable = code\npoints = 1 2\n", None, "sweep.points"),
            ("[sweep]\nseed = -1\n", None, "sweep.seed"),
            ("[protocol]\nack_bits = 4\n", None, "protocol.ack_bits"),
            ("[protocol]\ntimeout = 0\n", None, "protocol.timeout"),
            ("[output]\nemit_simulated = false\n", None, "output.emit_simulated"),
            ("[output]\nworkers = 0\n", None, "output.workers"),
            ("[energy]\nbit_rate = 0\n", None, "energy.bit_rate"),
            ("[sweep]\npoints = 1 nan\n", 2, "sweep.points"),
        ],
    )
    def test_reported_with_location(self, text, line, key):
        with pytest.raises(ConfigError) as exc:
            parse_config(text)
        assert exc.value.key == key
        if line is not None:
            assert exc.value.line == line

    def test_semantic_error_keeps_line(self):
        with pytest.raises(ConfigError) as exc:
            parse_config("[sweep]\n\nseed = -5\n")
        assert exc.value.line == 3

    def test_is_value_error(self):
        with pytest.raises(ValueError):
            parse_config("[x]\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "none.cfg")

    def test_binary_file(self, tmp_path):
        p = tmp_path / "bad.cfg"
        p.write_bytes(b"\xff\xfe\x00")
        with pytest.raises(ConfigError):
            load_config(p)


class TestRoundTrip:
    def test_emit_parse(self):
        cfg = parse_config(ARQ)
        again = parse_config(emit_config(cfg))
        assert again == cfg
        assert again.scenario == cfg.scenario

    def test_emit_lists_every_key(self):
        text = emit_config(parse_config(""))
        for sec, keys in SCHEMA.items():
            assert f"[{sec}]" in text
            for k in keys:
                assert f"\n{k} = " in text

    @given(
        beta=st.floats(0.01, 0.99),
        seed=st.integers(0, 2**64 - 1),
        trials=st.integers(1, 10**7),
        kind=st.sampled_from(["dt", "src", "mrc"]),
        pts=st.lists(st.floats(-20, 60, allow_nan=False), min_size=1, max_size=5, unique=True).map(sorted),
    )
    @settings(max_examples=50, deadline=None)
    def test_property(self, beta, seed, trials, kind, pts):
        text = (f"topology = {kind}\nbeta = {beta!r}\nseed = {seed}\ntrials = {trials}\n"
                f"[sweep]\npoints = {' '.join(repr(p) for p in pts)}\n")
        cfg = parse_config(text)
        assert parse_config(emit_config(cfg)) == cfg

    def test_with_values(self):
        cfg = parse_config(ARQ).with_values(sweep__seed=11)
        assert cfg.scenario.master_seed == 11
        with pytest.raises(ConfigError):
            cfg.with_values(sweep__nope=1)

    def test_load(self, tmp_path):
        p = tmp_path / "run.cfg"
        p.write_text(ARQ)
        assert load_config(p) == parse_config(ARQ)
