import math

import numpy as np
import pytest

from frctnofdm import (
    ChannelKind,
    ChannelModel,
    Waveform,
    add_awgn,
    apply_channel,
    effective_taps,
    impulse_taps,
    three_db_bandwidth,
    transfer_function,
)
from frctnofdm.channel import FirTaps, export_taps_csv


def test_cdf_shapes():
    for kind in (ChannelKind.EXP_DECAY, ChannelKind.CEILING_BOUNCE):
        model = ChannelModel(kind, 3e-9)
        t = np.linspace(0, 200e-9, 500)
        c = model.cdf(t)
        assert c[0] == 0.0
        assert np.all(np.diff(c) >= 0)
        assert c[-1] > 0.99
        assert model.cdf(-1e-9) == 0.0


def test_tail_time_inverts_cdf():
    for kind in (ChannelKind.EXP_DECAY, ChannelKind.CEILING_BOUNCE):
        model = ChannelModel(kind, 5e-9)
        for residue in (0.1, 1e-3, 1e-6):
            t = model.tail_time(residue)
            assert model.cdf(t) == pytest.approx(1.0 - residue, abs=1e-12)


def test_impulse_taps_preserve_energy():
    model = ChannelModel(ChannelKind.CEILING_BOUNCE, 3e-9)
    taps = impulse_taps(model, 1e-9, energy_threshold=0.9999)
    assert np.all(taps.taps >= 0)
    assert taps.taps.sum() == pytest.approx(1.0, abs=2e-4)
    assert taps.truncation_residue == pytest.approx(1.0 - taps.taps.sum())


def test_ed_bandwidth_matches_closed_form():
    # first-order low-pass: f_3dB = 1/(4*pi*D)
    d = 3e-9
    model = ChannelModel(ChannelKind.EXP_DECAY, d)
    expected = 1.0 / (4.0 * math.pi * d)
    assert three_db_bandwidth(model, resolution=1e3) == pytest.approx(expected, rel=5e-3)


def test_cb_bandwidth_scale_invariance():
    products = [
        three_db_bandwidth(ChannelModel(ChannelKind.CEILING_BOUNCE, d), resolution=1e3) * d
        for d in (3e-9, 6e-9, 9e-9)
    ]
    assert max(products) / min(products) == pytest.approx(1.0, rel=1e-3)


def test_transfer_function_normalized_and_decreasing():
    model = ChannelModel(ChannelKind.CEILING_BOUNCE, 3e-9)
    freqs = np.linspace(0, 50e6, 200)
    db = transfer_function(model, freqs)
    assert db[0] == pytest.approx(0.0, abs=1e-9)
    assert np.all(np.diff(db) < 0.1)
    with pytest.raises(ValueError):
        transfer_function(model, np.array([-1.0]))


def test_effective_taps_awgn_identity():
    taps = effective_taps(ChannelModel(ChannelKind.AWGN_ONLY), 1e8)
    np.testing.assert_allclose(taps.taps, [1.0])


def test_effective_taps_unit_dc_gain_and_cp_fit():
    taps = effective_taps(ChannelModel(ChannelKind.CEILING_BOUNCE, 3e-9), 1e8)
    assert taps.taps.sum() == pytest.approx(1.0, abs=0.02)
    energy = np.sum(taps.taps**2)
    # nearly all energy must sit inside a 16-sample cyclic prefix
    assert np.sum(taps.taps[16:] ** 2) / energy < 1e-3


def test_apply_channel_identity_and_interval_check():
    wave = Waveform(np.arange(32.0), 1e8)
    out = apply_channel(wave, FirTaps(np.array([1.0]), 1e-8, 0.0))
    np.testing.assert_allclose(out.samples, wave.samples)
    with pytest.raises(ValueError):
        apply_channel(wave, FirTaps(np.array([1.0]), 2e-8, 0.0))


def test_add_awgn_power_and_determinism():
    rng = np.random.default_rng(0)
    wave = Waveform(rng.standard_normal(200_000) + 2.0, 1e8)
    p_rx = np.mean(wave.samples**2)
    out1 = add_awgn(wave, 10.0, 123)
    out2 = add_awgn(wave, 10.0, 123)
    np.testing.assert_array_equal(out1.samples, out2.samples)
    noise = out1.samples - wave.samples
    assert np.var(noise) == pytest.approx(p_rx / 10.0, rel=0.02)


def test_add_awgn_infinite_snr_is_noiseless():
    wave = Waveform(np.ones(16), 1e8)
    out = add_awgn(wave, float("inf"), 0)
    np.testing.assert_array_equal(out.samples, wave.samples)


def test_model_validation():
    with pytest.raises(ValueError):
        ChannelModel(ChannelKind.CEILING_BOUNCE, 0.0)
    with pytest.raises(ValueError):
        three_db_bandwidth(ChannelModel(ChannelKind.AWGN_ONLY))


def test_export_taps_csv(tmp_path):
    taps = effective_taps(ChannelModel(ChannelKind.CEILING_BOUNCE, 3e-9), 1e8)
    path = tmp_path / "taps.csv"
    export_taps_csv(taps, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "index,delay_s,coefficient"
    assert len(lines) == taps.taps.size + 1
