import itertools

import numpy as np
import pytest

from frctnofdm import (
    FrameConfig,
    ChannelKind,
    ChannelModel,
    make_basis,
    correlation_matrix,
    ifrct,
    build_frames,
    apply_channel,
    effective_taps,
    remove_cp,
    estimate_channel,
    equalize,
    iterative_detect,
    pam_demap,
    decode,
)
from frctnofdm.txchain import add_cp, pam_map


def test_remove_cp_inverts_add_cp():
    sym = np.arange(16.0)
    np.testing.assert_allclose(remove_cp(add_cp(sym, 4), 4), sym)
    with pytest.raises(ValueError):
        remove_cp(sym, 16)


def test_estimate_channel_recovers_known_response():
    rng = np.random.default_rng(0)
    n = 64
    h_time = np.zeros(n)
    h_time[:3] = [0.8, 0.15, 0.05]
    h_bins = np.fft.fft(h_time)
    tx = rng.standard_normal((5, n))
    tx_freq = np.fft.fft(tx, axis=1)
    rx = np.fft.ifft(tx_freq * h_bins, axis=1).real  # circular convolution
    est = estimate_channel(rx, tx_freq)
    np.testing.assert_allclose(est.bins, h_bins, atol=1e-10)
    assert est.n_training_avg == 5


def test_equalize_inverts_channel():
    rng = np.random.default_rng(1)
    n = 64
    h_time = np.zeros(n)
    h_time[:2] = [0.9, 0.1]
    h_bins = np.fft.fft(h_time)
    x = rng.standard_normal(n)
    rx = np.fft.ifft(np.fft.fft(x) * h_bins).real
    est = estimate_channel(rx[None, :], np.fft.fft(x)[None, :])
    np.testing.assert_allclose(equalize(rx, est), x, atol=1e-10)


def test_iterative_detect_exhaustive_small_case():
    basis = make_basis(4, 0.8)
    corr = correlation_matrix(basis)
    for bits in itertools.product([-1.0, 1.0], repeat=4):
        x = np.array(bits)
        recovered = iterative_detect(corr @ x, corr, 20)
        np.testing.assert_array_equal(recovered, x)


def test_iterative_detect_zero_iterations_is_sign_decision():
    basis = make_basis(8, 0.9)
    corr = correlation_matrix(basis)
    r = np.array([0.4, -0.1, 2.0, -3.0, 0.0, 1.0, -0.5, 0.2])
    np.testing.assert_array_equal(
        iterative_detect(r, corr, 0), np.where(r >= 0, 1.0, -1.0)
    )
    with pytest.raises(ValueError):
        iterative_detect(r, corr, -1)


def test_pam_demap_inverts_pam_map():
    rng = np.random.default_rng(2)
    for order in (2, 4, 8):
        bits = rng.integers(0, 2, size=120)
        np.testing.assert_array_equal(pam_demap(pam_map(bits, order), order), bits)


def test_decode_noiseless_awgn_is_error_free():
    config = FrameConfig(alpha=0.9, n_frames=1, payload_symbols_per_frame=16)
    rng = np.random.default_rng(3)
    bits = rng.integers(0, 2, size=config.payload_bits)
    basis = make_basis(config.n_subcarriers, config.alpha)
    tx = build_frames(bits, config, basis)
    taps = effective_taps(ChannelModel(ChannelKind.AWGN_ONLY), config.sample_rate)
    rx_wave = apply_channel(tx.waveform, taps)
    corr = correlation_matrix(basis)
    decoded = decode(rx_wave, config, tx, basis, corr, iterations=20)
    np.testing.assert_array_equal(decoded, bits)


def test_decode_rejects_wrong_length():
    config = FrameConfig(n_frames=1, payload_symbols_per_frame=4)
    rng = np.random.default_rng(4)
    bits = rng.integers(0, 2, size=config.payload_bits)
    basis = make_basis(config.n_subcarriers, config.alpha)
    tx = build_frames(bits, config, basis)
    corr = correlation_matrix(basis)
    from frctnofdm.txchain import Waveform

    bad = Waveform(tx.waveform.samples[:-1], config.sample_rate)
    with pytest.raises(ValueError):
        decode(bad, config, tx, basis, corr)


def test_estimate_channel_validates_shapes():
    with pytest.raises(ValueError):
        estimate_channel(np.zeros((2, 8)), np.zeros((3, 8)))
