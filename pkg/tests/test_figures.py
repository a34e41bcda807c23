import pytest

from coopwsn.codecs import CodeSpec
from coopwsn.error_control import Strategy, sw_arq_throughput_analytic
from coopwsn.figures import (
    DEFAULT_BER,
    DEFAULT_SNR_DB,
    FIGURES,
    figure_curves,
    run_figure,
    theoretical_throughput_rows,
)


class TestCurves:
    def test_default_sweeps(self):
        assert DEFAULT_SNR_DB[0] == 0.0 and DEFAULT_SNR_DB[-1] == 30.0 and len(DEFAULT_SNR_DB) == 31
        assert DEFAULT_BER[0] == pytest.approx(1e-5) and DEFAULT_BER[-1] == pytest.approx(1e-1)

    @pytest.mark.parametrize(
        "name, curves",
        [
            ("fig5", ["uncoded", "rs", "rs_src", "rs_mrc"]),
            ("fig6", ["dt", "src", "mrc", "theoretical"]),
            ("fig7", ["dt", "src", "mrc", "theoretical"]),
            ("fig8", ["harq1_src", "harq2_src"]),
            ("fig9", ["harq1_mrc", "harq2_mrc"]),
        ],
    )
    def test_names(self, name, curves):
        assert [c.name for c in figure_curves(name, trials=10)] == curves

    def test_fig5_setup(self):
        curves = {c.name: c for c in figure_curves("fig5")}
        assert curves["uncoded"].scenario.protocol.code == CodeSpec.none()
        assert curves["rs_mrc"].scenario.protocol.code == CodeSpec.rs(31, 21)
        assert curves["rs_mrc"].scenario.topology.kind == "mrc"
        assert all(c.metric == "ber" for c in curves.values())
        assert all(c.scenario.trials_per_point == 100_000 for c in curves.values())

    def test_fig6_setup(self):
        curves = {c.name: c for c in figure_curves("fig6", seed=4)}
        sc = curves["src"].scenario
        assert sc.protocol.strategy is Strategy.SW_ARQ
        assert sc.sweep_variable == "ber" and sc.master_seed == 4
        assert curves["theoretical"].mode == "analytic"
        assert curves["theoretical"].scenario.protocol.ack_error_model == "ideal"
        assert {c.metric for c in figure_curves("fig7")} == {"mean_delay"}

    def test_fig8_setup(self):
        c1, c2 = figure_curves("fig8")
        assert c1.scenario.protocol.strategy is Strategy.HARQ_T1
        assert c2.scenario.protocol.strategy is Strategy.HARQ_T2
        assert c1.scenario.protocol.code == CodeSpec.hamming74()
        assert c1.metric == "ser"

    def test_overrides(self):
        (c, *_) = figure_curves("fig5", trials=12, sweep_points=[3.0, 4.0], geometry={"path_loss_exponent": 3.0})
        assert c.scenario.sweep_points == (3.0, 4.0)
        assert c.scenario.trials_per_point == 12
        assert c.scenario.topology.link_sd.path_loss_exponent == 3.0

    def test_unknown(self):
        with pytest.raises(ValueError):
            figure_curves("fig4")
        assert "fig4" not in FIGURES


class TestRun:
    def test_theoretical_rows(self):
        sc = figure_curves("fig6", sweep_points=[1e-3, 1e-2])[-1].scenario
        rows = theoretical_throughput_rows(sc)
        for ber, row in zip((1e-3, 1e-2), rows):
            per = 1 - (1 - ber) ** 100
            assert row.throughput == pytest.approx(sw_arq_throughput_analytic(per, 96, 4, 16e-6, tx_time=100e-6))
        assert rows[0].throughput > rows[1].throughput

    def test_small_run(self):
        out = run_figure("fig9", trials=50, sweep_points=[5.0, 15.0], emit_analytic=True)
        assert set(out) == {"harq1_mrc", "harq2_mrc", "harq1_mrc_analytic", "harq2_mrc_analytic"}
        assert all(len(rows) == 2 for rows in out.values())
        assert out["harq1_mrc_analytic"][0].mode == "analytic"

    def test_curve_filter(self):
        out = run_figure("fig6", trials=30, sweep_points=[0.05], curves=["dt", "theoretical"])
        assert list(out) == ["dt", "theoretical"]
        with pytest.raises(ValueError):
            run_figure("fig6", trials=30, sweep_points=[0.05], curves=["tdma"])
