import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats
from scipy.integrate import quad

from coopwsn.channel import (
    ChannelModel,
    FadedSnrSample,
    LinkSpec,
    average_snr,
    draw_snr,
    flip_bits,
    inject_frame_errors,
    inject_symbol_errors,
    sample_snr,
    snr_density,
    transmit_symbols,
)
from coopwsn.modem import ModulationSpec, demap_symbols, map_symbols, symbol_errors


class TestLinkSpec:
    @pytest.mark.parametrize(
        "link, sigma",
        [
            (LinkSpec(1.0), 1.0),
            (LinkSpec(2.0), 0.25),
            (LinkSpec(3.0, tx_power=0.0), 0.0),
            (LinkSpec(10.0, path_loss_exponent=3.0, tx_power=2.0, noise_power=0.5), 4e-3),
        ],
    )
    def test_average_snr(self, link, sigma):
        assert average_snr(link) == pytest.approx(sigma, rel=1e-12, abs=0)

    @pytest.mark.parametrize(
        "kwargs",
        [dict(distance=0.0), dict(distance=1.0, noise_power=0.0), dict(distance=1.0, tx_power=-1.0),
         dict(distance=1.0, path_loss_exponent=-0.5)],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            LinkSpec(**kwargs)

    def test_monotone_on_grid(self):
        d = np.linspace(0.5, 50, 60)
        s = [average_snr(LinkSpec(x, path_loss_exponent=2.7)) for x in d]
        assert np.all(np.diff(s) < 0)
        p = [average_snr(LinkSpec(5.0, tx_power=x)) for x in d]
        assert np.all(np.diff(p) > 0)

    def test_scaled(self):
        link = LinkSpec(4.0).scaled(0.5)
        assert link.distance == 2.0 and average_snr(link) == 0.25


class TestDensity:
    def test_values(self):
        assert snr_density(0.0, 1.0) == 1.0
        assert snr_density(2.0, 2.0) == pytest.approx(0.5 * np.exp(-1), abs=1e-12)
        assert snr_density(2.0, 2.0) == pytest.approx(0.183940, abs=1e-6)

    @pytest.mark.parametrize("sigma", [0.1, 1.0, 37.0])
    def test_normalised(self, sigma):
        total, _ = quad(snr_density, 0, 50 * sigma, args=(sigma,))
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_rejects(self):
        with pytest.raises(ValueError):
            snr_density(1.0, 0.0)
        with pytest.raises(ValueError):
            snr_density(-1.0, 1.0)


class TestSampling:
    def test_mean_and_ks(self):
        g = draw_snr(2.0, np.random.default_rng(3), size=10**6)
        assert g.min() >= 0
        assert g.mean() == pytest.approx(2.0, abs=0.01)
        d = stats.kstest(g, "expon", args=(0, 2.0)).statistic
        assert d < 0.01

    def test_sample_reproducible(self):
        a = [float(sample_snr(3.0, np.random.default_rng(9))) for _ in range(3)]
        assert len(set(a)) == 1
        assert isinstance(sample_snr(3.0, np.random.default_rng(0)), FadedSnrSample)
        with pytest.raises(ValueError):
            sample_snr(0.0, np.random.default_rng(0))
        with pytest.raises(ValueError):
            FadedSnrSample(-0.1)


class TestTransmit:
    def test_noiseless_limit(self, rng):
        x = map_symbols(rng.integers(0, 2, 64), ModulationSpec(4))
        y = transmit_symbols(x, 1e30, rng)
        assert np.allclose(y, x, atol=1e-12)

    def test_zero_snr_is_guessing(self):
        rng = np.random.default_rng(5)
        mod = ModulationSpec(4)
        bits = rng.integers(0, 2, size=(1, 200_000), dtype=np.uint8)
        y = transmit_symbols(map_symbols(bits, mod), 0.0, rng)
        ser = symbol_errors(bits, demap_symbols(y, mod), 2)[0] / 100_000
        assert ser == pytest.approx(0.75, abs=0.02)

    def test_same_seed_same_output(self):
        x = np.ones((3, 5), complex)
        a = transmit_symbols(x, np.array([1.0, 2.0, 3.0]), np.random.default_rng(1))
        b = transmit_symbols(x, np.array([1.0, 2.0, 3.0]), np.random.default_rng(1))
        assert np.array_equal(a, b)

    def test_raw_observation_noise_variance(self):
        rng = np.random.default_rng(2)
        x = np.zeros(200_000, complex)
        y = transmit_symbols(x, 4.0, rng, equalize=False)
        assert np.var(y.real) == pytest.approx(0.5, rel=0.02)
        assert np.var(y.imag) == pytest.approx(0.5, rel=0.02)

    def test_block_fading_shape(self, rng):
        with pytest.raises(ValueError):
            transmit_symbols(np.array([], complex), 1.0, rng)
        with pytest.raises(ValueError):
            transmit_symbols(np.ones(4, complex), -1.0, rng)


class TestInjection:
    def test_flip_rate(self):
        out = flip_bits(np.zeros(10**6, np.uint8), 0.01, np.random.default_rng(0))
        assert out.mean() == pytest.approx(0.01, rel=0.05)

    def test_symbol_errors_always_change_the_symbol(self):
        bits = np.zeros((1000, 8), np.uint8)
        out = inject_symbol_errors(bits, 2, 1.0, np.random.default_rng(0))
        assert np.all(symbol_errors(bits, out, 2) == 4)
        with pytest.raises(ValueError):
            inject_symbol_errors(np.zeros(7, np.uint8), 2, 0.5, np.random.default_rng(0))

    def test_frame_errors_flip_one_bit(self):
        out = inject_frame_errors(np.zeros((500, 20), np.uint8), 1.0, np.random.default_rng(0))
        assert np.all(out.sum(axis=1) == 1)

    @given(st.sampled_from(["rayleigh", "awgn", "bit_flip"]), st.floats(0, 1))
    def test_channel_model(self, kind, rate):
        m = ChannelModel(kind, rate)
        assert m.soft == (kind in ("rayleigh", "awgn"))

    def test_channel_model_rejects(self):
        with pytest.raises(ValueError):
            ChannelModel("rician")
        with pytest.raises(ValueError):
            ChannelModel("bit_flip", 1.5)
