"""Optical-wireless baseband channel.

Exponential-decay (ED) and ceiling-bounce (CB) diffuse impulse responses
parameterized by RMS delay spread, discretized to FIR taps by analytic
CDF bin integration, plus signal-independent additive white Gaussian
noise. Both continuous responses have unit DC gain.
"""
import csv
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class ChannelKind(Enum):
    AWGN_ONLY = "awgn"
    EXP_DECAY = "ed"
    CEILING_BOUNCE = "cb"


# tail scale a = 12*sqrt(11/13)*D of the ceiling-bounce response
CB_A_FACTOR = 12.0 * math.sqrt(11.0 / 13.0)


@dataclass(frozen=True)
class ChannelModel:
    kind: ChannelKind
    rms_delay_spread: float = 0.0  # seconds, unused for AWGN_ONLY

    def __post_init__(self):
        if self.kind is not ChannelKind.AWGN_ONLY and self.rms_delay_spread <= 0:
            raise ValueError("rms_delay_spread must be > 0 for ED/CB models")

    @property
    def cb_a(self) -> float:
        return CB_A_FACTOR * self.rms_delay_spread

    def cdf(self, t):
        """Fraction of the impulse-response energy arriving before time t."""
        t = np.asarray(t, dtype=np.float64)
        if self.kind is ChannelKind.EXP_DECAY:
            return np.where(t <= 0, 0.0, 1.0 - np.exp(-t / (2.0 * self.rms_delay_spread)))
        if self.kind is ChannelKind.CEILING_BOUNCE:
            a = self.cb_a
            return np.where(t <= 0, 0.0, 1.0 - (a / (t + a)) ** 6)
        raise ValueError("AWGN_ONLY has no impulse-response CDF")

    def tail_time(self, residue: float) -> float:
        """Time by which all but `residue` of the energy has arrived."""
        if self.kind is ChannelKind.EXP_DECAY:
            return -2.0 * self.rms_delay_spread * math.log(residue)
        if self.kind is ChannelKind.CEILING_BOUNCE:
            return self.cb_a * (residue ** (-1.0 / 6.0) - 1.0)
        return 0.0


@dataclass(frozen=True)
class FirTaps:
    taps: np.ndarray
    tap_interval: float  # seconds
    truncation_residue: float  # 1 - sum(taps)


def impulse_taps(
    model: ChannelModel, tap_interval: float, energy_threshold: float = 0.9999
) -> FirTaps:
    """Discretize the impulse response by integrating the CDF over each bin.

    Taps are emitted until their cumulative sum reaches energy_threshold,
    so the DC gain before truncation is preserved exactly.
    """
    if tap_interval <= 0:
        raise ValueError("tap_interval must be positive")
    if model.kind is ChannelKind.AWGN_ONLY:
        return FirTaps(np.array([1.0]), tap_interval, 0.0)
    n_taps = max(1, math.ceil(model.tail_time(1.0 - energy_threshold) / tap_interval))
    edges = np.arange(n_taps + 1) * tap_interval
    cdf = model.cdf(edges)
    taps = np.diff(cdf)
    return FirTaps(taps, tap_interval, float(1.0 - taps.sum()))


# anti-aliasing low-pass of the receiver front end: Butterworth magnitude
# of this order, cutoff at this fraction of the Nyquist frequency
DEFAULT_ANTIALIAS_ORDER = 12
ANTIALIAS_CUTOFF_FRACTION = 1.0

# effective sample-and-hold interval of the reference link's analog front
# end, calibrated once so the CB model reproduces the reported 3-dB
# bandwidths (20.9/11.7/8.3 MHz at D = 3/6/9 ns)
MEASURED_HOLD_INTERVAL = 8.8e-9


def _complex_response(model: ChannelModel, freqs: np.ndarray) -> np.ndarray:
    """Continuous-model frequency response (complex, unit DC gain) from a
    finely discretized impulse response (step <= D/100, covering all but
    1e-6 of the energy), via a direct Fourier sum over bin midpoints."""
    step = model.rms_delay_spread / 100.0
    taps = impulse_taps(model, step, energy_threshold=1.0 - 1e-6)
    delays = (np.arange(taps.taps.size) + 0.5) * step
    h = np.exp(-2j * np.pi * np.outer(freqs, delays)) @ taps.taps
    return h / taps.taps.sum()


def _front_end_response(freqs: np.ndarray, hold_interval: float, antialias_order: int):
    """DAC sample-and-hold sinc (with its linear phase) times the
    anti-aliasing Butterworth magnitude, cutoff at half the sample rate."""
    resp = np.ones(freqs.shape, dtype=np.complex128)
    if hold_interval > 0:
        resp *= np.sinc(freqs * hold_interval) * np.exp(-1j * np.pi * freqs * hold_interval)
        if antialias_order > 0:
            cutoff = ANTIALIAS_CUTOFF_FRACTION * 0.5 / hold_interval
            resp /= np.sqrt(1.0 + (freqs / cutoff) ** (2 * antialias_order))
    return resp


def transfer_function(
    model: ChannelModel,
    freqs: np.ndarray,
    front_end_interval: float = 0.0,
    antialias_order: int = 0,
) -> np.ndarray:
    """Magnitude response in dB, normalized to 0 dB at DC.

    With front_end_interval > 0 the response additionally includes the
    front end of a sampled system with that sample interval (DAC hold
    sinc, and the anti-aliasing low-pass when antialias_order > 0),
    which is what the signal actually experiences in simulation.
    """
    freqs = np.asarray(freqs, dtype=np.float64)
    if np.any(freqs < 0):
        raise ValueError("frequencies must be >= 0")
    h = _front_end_response(freqs, front_end_interval, antialias_order)
    if model.kind is not ChannelKind.AWGN_ONLY:
        h = h * _complex_response(model, freqs)
    return 20.0 * np.log10(np.maximum(np.abs(h), 1e-300))


def effective_taps(
    model: ChannelModel,
    sample_rate: float,
    n_taps: int = 64,
    antialias_order: int = DEFAULT_ANTIALIAS_ORDER,
    grid_len: int = 4096,
) -> FirTaps:
    """Symbol-rate FIR taps of the full analog path: DAC hold, multipath
    channel, anti-aliasing low-pass, instantaneous sampling.

    Built by sampling the combined frequency response on a dense grid
    and inverse-transforming; the band limitation keeps the response
    faithful over [0, sample_rate/2], which plain CDF bin integration at
    the symbol rate does not (its alias terms flatten the high band).
    """
    if sample_rate <= 0:
        raise ValueError("sample_rate must be positive")
    if model.kind is ChannelKind.AWGN_ONLY:
        return FirTaps(np.array([1.0]), 1.0 / sample_rate, 0.0)
    dt = 1.0 / sample_rate
    freqs = np.arange(grid_len // 2 + 1) * sample_rate / grid_len
    resp = _complex_response(model, freqs) * _front_end_response(freqs, dt, antialias_order)
    # the zero-phase anti-alias magnitude makes the response slightly
    # noncausal; a few samples of extra delay keep that part inside the
    # truncation window instead of wrapping around
    lead = 4
    resp *= np.exp(-2j * np.pi * freqs * lead * dt)
    h = np.fft.irfft(resp, grid_len)[:n_taps]
    return FirTaps(h, dt, float(1.0 - h.sum()))


def three_db_bandwidth(
    model: ChannelModel,
    resolution: float = 1e4,
    front_end_interval: float = 0.0,
    antialias_order: int = 0,
) -> float:
    """Smallest frequency where the response drops to -3 dB, by bisection."""
    if model.kind is ChannelKind.AWGN_ONLY:
        raise ValueError("AWGN_ONLY channel has unbounded bandwidth")

    def db_at(f):
        return transfer_function(
            model, np.array([f]), front_end_interval, antialias_order
        )[0]

    lo, hi = 0.0, 1e6
    while db_at(hi) > -3.0:
        lo, hi = hi, hi * 2.0
        if hi > 1e12:
            raise RuntimeError("no -3 dB crossing found below 1 THz")
    while hi - lo > resolution:
        mid = (lo + hi) / 2.0
        if db_at(mid) > -3.0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def apply_channel(waveform, taps: FirTaps):
    """Linear convolution with the FIR taps, truncated to the input length."""
    from .txchain import Waveform

    if not math.isclose(taps.tap_interval, 1.0 / waveform.sample_rate, rel_tol=1e-9):
        raise ValueError("tap interval does not match the waveform sample interval")
    out = np.convolve(waveform.samples, taps.taps)[: waveform.samples.size]
    return Waveform(out, waveform.sample_rate)


def add_awgn(waveform, snr_db: float, noise_seed: int):
    """Add white Gaussian noise at the given SNR.

    The noise power is referenced to the mean-square of the incoming
    (post-channel) waveform, DC bias included. snr_db = inf disables the
    noise; a zero input falls back to unit reference power.
    """
    from .txchain import Waveform

    if waveform.samples.size == 0:
        raise ValueError("empty waveform")
    if math.isinf(snr_db):
        return waveform
    p_rx = float(np.mean(waveform.samples**2))
    if p_rx == 0.0:
        p_rx = 1.0  # degenerate all-zero input
    sigma_n = math.sqrt(p_rx / 10.0 ** (snr_db / 10.0))
    rng = np.random.default_rng(noise_seed)
    noise = rng.standard_normal(waveform.samples.size) * sigma_n
    return Waveform(waveform.samples + noise, waveform.sample_rate)


def export_taps_csv(taps: FirTaps, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "delay_s", "coefficient"])
        for i, h in enumerate(taps.taps):
            writer.writerow([i, repr(i * taps.tap_interval), repr(float(h))])
