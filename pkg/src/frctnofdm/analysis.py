"""Closed-form signal statistics and spectrum estimation.

Rate/bandwidth algebra for the compressed multicarrier signal, the
clipped-Gaussian statistics of the DC-biased waveform (clip probability,
electrical power, attenuation factor), a Kolmogorov-Smirnov Gaussianity
check, and a Welch PSD estimator for spectrum plots.
"""
import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy import signal as sp_signal
from scipy import stats as sp_stats


@dataclass(frozen=True)
class RateSpec:
    n_subcarriers: int
    alpha: float
    symbol_duration: float  # T, seconds
    bandwidth_hz: float  # B = alpha*N/(2T)
    nyquist_rate_hz: float  # R_N = 2B
    symbol_rate_hz: float  # R_S = N/T


def rate_spec(n_subcarriers: int, alpha: float, bit_rate: float, pam_order: int) -> RateSpec:
    """Bandwidth / Nyquist-rate / symbol-rate algebra for one configuration."""
    if n_subcarriers <= 0 or bit_rate <= 0 or not 0 < alpha <= 1:
        raise ValueError("invalid rate configuration")
    bits_per_sym = int(math.log2(pam_order))
    t = n_subcarriers * bits_per_sym / bit_rate
    bandwidth = alpha * n_subcarriers / (2.0 * t)
    return RateSpec(
        n_subcarriers=n_subcarriers,
        alpha=alpha,
        symbol_duration=t,
        bandwidth_hz=bandwidth,
        nyquist_rate_hz=2.0 * bandwidth,
        symbol_rate_hz=n_subcarriers / t,
    )


def q_function(v: float) -> float:
    """Standard normal tail probability, Q(v) = 1 - Phi(v)."""
    if math.isinf(v):
        return 0.0 if v > 0 else 1.0
    return 0.5 * math.erfc(v / math.sqrt(2.0))


def phi(v: float) -> float:
    """Standard normal CDF."""
    return 1.0 - q_function(v)


@dataclass(frozen=True)
class ClippedGaussianStats:
    sigma: float
    b_dc: float
    power: float
    attenuation: float
    clip_probability: float


def clipped_pdf(x: np.ndarray, sigma: float, b_dc: float):
    """Density of the biased-and-clipped signal.

    Returns (continuous density at x, point mass at zero). The continuous
    part is the N(b_dc, sigma^2) density restricted to x > 0; the clipped
    probability Q(b_dc/sigma) concentrates at zero.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    x = np.asarray(x, dtype=np.float64)
    density = np.where(
        x > 0,
        np.exp(-((x - b_dc) ** 2) / (2.0 * sigma**2)) / (math.sqrt(2.0 * math.pi) * sigma),
        0.0,
    )
    return density, q_function(b_dc / sigma)


def clipped_power(sigma: float, b_dc: float) -> float:
    """Electrical power E[s^2] of the biased-and-clipped Gaussian signal.

    sigma^2*Phi(r) + b_dc^2*Phi(r) + sigma*b_dc*exp(-r^2/2)/sqrt(2*pi)
    with r = b_dc/sigma; converges to sigma^2 + b_dc^2 for large bias.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if b_dc < 0:
        raise ValueError("b_dc must be >= 0")
    r = b_dc / sigma
    return (
        (sigma**2 + b_dc**2) * phi(r)
        + sigma * b_dc * math.exp(-(r**2) / 2.0) / math.sqrt(2.0 * math.pi)
    )


def attenuation_factor(sigma: float, b_dc: float) -> float:
    """Clipping attenuation of the useful signal, sqrt(Phi(b_dc/sigma))."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    return math.sqrt(phi(b_dc / sigma))


def clipped_stats(sigma: float, b_dc: float) -> ClippedGaussianStats:
    return ClippedGaussianStats(
        sigma=sigma,
        b_dc=b_dc,
        power=clipped_power(sigma, b_dc),
        attenuation=attenuation_factor(sigma, b_dc),
        clip_probability=q_function(b_dc / sigma),
    )


def gaussianity_ks(samples: np.ndarray) -> float:
    """One-sample KS statistic of the standardized samples vs N(0, 1)."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.size < 1000:
        raise ValueError("need at least 1000 samples")
    z = (samples - samples.mean()) / samples.std()
    return float(sp_stats.kstest(z, "norm").statistic)


def psd_estimate(waveform, segment_len: int = 1024):
    """Averaged-periodogram PSD (Hann window, 50% overlap).

    DC is removed first; the result is in dB normalized so the mean
    in-band power is 0 dB ("in-band" meaning bins within 10 dB of the
    peak). Returns (freqs_hz, power_db).
    """
    x = waveform.samples
    if x.size < segment_len:
        raise ValueError("waveform shorter than one segment")
    x = x - x.mean()
    freqs, psd = sp_signal.welch(
        x,
        fs=waveform.sample_rate,
        window="hann",
        nperseg=segment_len,
        noverlap=segment_len // 2,
        detrend=False,
    )
    db = 10.0 * np.log10(np.maximum(psd, 1e-300))
    in_band = db >= db.max() - 10.0
    db -= db[in_band].mean()
    return freqs, db


def export_xy_csv(path, x, y, header=("x", "value")) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(header))
        for xi, yi in zip(x, y):
            writer.writerow([repr(float(xi)), repr(float(yi))])
