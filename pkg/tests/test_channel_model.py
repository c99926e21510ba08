import numpy as np
import pytest
from scipy.linalg import circulant

from svt.channel_model import (
    ChannelRealization,
    coherence_time,
    constant_channel,
    eaui_support,
    multipath_time_channel,
    perturb_gains,
    rayleigh_freq_channel,
)
from svt.signal_core import RngStream, dft_matrix


class TestRayleighChannel:
    def test_unit_mean_power(self):
        gains = np.concatenate(
            [rayleigh_freq_channel(1000, RngStream(1, i)).freq_gains for i in range(100)]
        )
        assert 0.97 < np.mean(np.abs(gains) ** 2) < 1.03

    def test_fixed_seed_reproducible(self):
        a = rayleigh_freq_channel(64, RngStream(5, 9))
        b = rayleigh_freq_channel(64, RngStream(5, 9))
        np.testing.assert_array_equal(a.freq_gains, b.freq_gains)

    def test_single_gain(self):
        ch = rayleigh_freq_channel(1, RngStream(2))
        assert ch.freq_gains.shape == (1,)
        assert ch.mode == "iid_rayleigh"


class TestMultipathChannel:
    def test_single_tap_is_flat(self):
        ch = multipath_time_channel(1, 32, RngStream(3))
        mags = np.abs(ch.freq_gains)
        np.testing.assert_allclose(mags, mags[0], atol=1e-12)

    def test_circulant_diagonalization(self):
        # the implied time-domain operator equals F^H diag(gains) F
        n = 64
        ch = multipath_time_channel(8, n, RngStream(7))
        padded = np.zeros(n, dtype=complex)
        padded[:8] = ch.taps
        h_time = circulant(padded)
        f = dft_matrix(n)
        h_spectral = f.conj().T @ np.diag(ch.freq_gains) @ f
        assert np.max(np.abs(h_time - h_spectral)) < 1e-10

    def test_circulant_action_on_vectors(self):
        n = 64
        ch = multipath_time_channel(8, n, RngStream(11))
        padded = np.zeros(n, dtype=complex)
        padded[:8] = ch.taps
        gen = np.random.default_rng(0)
        x = gen.standard_normal(n) + 1j * gen.standard_normal(n)
        f = dft_matrix(n)
        lhs = circulant(padded) @ x
        rhs = f.conj().T @ (ch.freq_gains * (f @ x))
        assert np.linalg.norm(lhs - rhs) / np.linalg.norm(lhs) < 1e-9

    def test_expected_tap_power(self):
        powers = [
            np.sum(np.abs(multipath_time_channel(8, 32, RngStream(13, i)).taps) ** 2)
            for i in range(10_000)
        ]
        assert abs(np.mean(powers) - 1.0) < 0.03

    def test_too_many_taps(self):
        with pytest.raises(ValueError):
            multipath_time_channel(9, 8, RngStream(0))


class TestCoherenceTime:
    def test_matches_clarke_example(self):
        # 1.8 GHz carrier at 10 km/h gives about 10.7 ms
        t_c = coherence_time(1.8e9, 10 * 1000 / 3600)
        assert 10.2e-3 <= t_c <= 11.5e-3

    def test_doppler_frequency(self):
        speed = 10 * 1000 / 3600
        doppler = speed * 1.8e9 / 299_792_458.0
        assert abs(doppler - 16.678) < 0.01
        assert abs(coherence_time(1.8e9, speed) - 9 / (16 * np.pi * doppler)) < 1e-15

    def test_doubling_speed_halves_exactly(self):
        assert coherence_time(1.8e9, 4.0) == coherence_time(1.8e9, 2.0) / 2

    def test_strictly_decreasing(self):
        assert coherence_time(2e9, 3.0) < coherence_time(1e9, 3.0)
        assert coherence_time(1e9, 6.0) < coherence_time(1e9, 3.0)

    def test_invalid(self):
        with pytest.raises(ValueError):
            coherence_time(0.0, 1.0)
        with pytest.raises(ValueError):
            coherence_time(1e9, -1.0)


class TestEauiSupport:
    def test_simple_case(self):
        ch = ChannelRealization(3, np.array([0.1, 0.9, 0.5]), None, "iid_rayleigh")
        assert eaui_support(ch, 2) == (1, 2)

    def test_ties_toward_lower_index(self):
        ch = constant_channel(5, 1.0)
        assert eaui_support(ch, 3) == (0, 1, 2)

    def test_matches_sort_oracle(self):
        ch = rayleigh_freq_channel(512, RngStream(19))
        mags = np.abs(ch.freq_gains)
        oracle = sorted(
            sorted(range(512), key=lambda i: (-mags[i], i))[:36]
        )
        assert eaui_support(ch, 36) == tuple(oracle)

    def test_permutation_consistency(self):
        ch = rayleigh_freq_channel(32, RngStream(21))
        perm = np.random.default_rng(1).permutation(32)
        permuted = ChannelRealization(32, ch.freq_gains[perm], None, "iid_rayleigh")
        base = eaui_support(ch, 5)
        moved = eaui_support(permuted, 5)
        # index i in the permuted channel holds gain perm[i] of the original
        assert sorted(perm[list(moved)]) == list(base)

    def test_k_too_large(self):
        with pytest.raises(ValueError):
            eaui_support(rayleigh_freq_channel(4, RngStream(0)), 5)


class TestPerturbGains:
    def test_zero_variance_is_identity(self):
        ch = rayleigh_freq_channel(16, RngStream(23))
        assert perturb_gains(ch, 0.0, RngStream(1)) is ch

    def test_error_scale(self):
        ch = constant_channel(100_000, 1.0)
        noisy = perturb_gains(ch, 0.04, RngStream(29))
        err = noisy.freq_gains - ch.freq_gains
        assert abs(np.mean(np.abs(err) ** 2) - 0.04) < 0.004
