"""Receiver chain: CP removal, training-based channel estimation, one-tap
frequency-domain equalization, demultiplexing, iterative ICI detection,
and PAM demapping."""
from dataclasses import dataclass

import numpy as np

from . import accel
from .frct import FrctBasis, frct
from .txchain import FrameConfig, TxOutput, pam_levels

# estimated DFT bins below this fraction of the strongest bin are floored
# so deep channel fades cannot blow up the equalizer noise
BIN_FLOOR_RATIO = 1e-6


@dataclass(frozen=True)
class ChannelEstimate:
    bins: np.ndarray  # (N,) complex per-DFT-bin gain
    n_training_avg: int


def remove_cp(rx_symbol: np.ndarray, cp_len: int) -> np.ndarray:
    """Drop the cyclic prefix (first cp_len samples)."""
    rx_symbol = np.asarray(rx_symbol)
    if cp_len < 0 or cp_len >= rx_symbol.shape[0]:
        raise ValueError("cp_len out of range")
    return rx_symbol[cp_len:]


def estimate_channel(rx_training: np.ndarray, tx_training_freq: np.ndarray) -> ChannelEstimate:
    """Per-bin channel gains from known training symbols.

    rx_training: (n_train, N) received time-domain training symbols (CP
    removed); tx_training_freq: (n_train, N) DFT-domain reference. Each
    symbol is transformed, divided elementwise, then averaged.
    """
    rx_training = np.atleast_2d(np.asarray(rx_training))
    tx_training_freq = np.atleast_2d(np.asarray(tx_training_freq))
    if rx_training.shape != tx_training_freq.shape:
        raise ValueError("training shapes do not match")
    if np.any(tx_training_freq == 0):
        raise ValueError("training reference has zero entries")
    per_symbol = np.fft.fft(rx_training, axis=1) / tx_training_freq
    bins = per_symbol.mean(axis=0)
    floor = BIN_FLOOR_RATIO * np.abs(bins).max()
    small = np.abs(bins) < floor
    if np.any(small):
        # keep the phase, floor the magnitude
        phase = np.where(np.abs(bins[small]) > 0, bins[small] / np.abs(bins[small]), 1.0)
        bins = bins.copy()
        bins[small] = floor * phase
    return ChannelEstimate(bins, rx_training.shape[0])


def equalize(rx_symbol: np.ndarray, est: ChannelEstimate) -> np.ndarray:
    """One-tap frequency-domain equalization of one symbol or an (N, nsym) batch."""
    rx_symbol = np.asarray(rx_symbol, dtype=np.float64)
    batch = rx_symbol.ndim == 2
    spec = np.fft.fft(rx_symbol, axis=0)
    spec /= est.bins[:, None] if batch else est.bins
    return np.fft.ifft(spec, axis=0).real


def iterative_detect(demuxed: np.ndarray, corr: np.ndarray, total_iterations: int) -> np.ndarray:
    """Iterative ICI cancellation with a shrinking decision region.

    Starting from a zero estimate, each pass subtracts the off-diagonal
    interference predicted by the correlation matrix and hard-decides
    entries outside [-d, d], with d shrinking linearly to 0 over the
    iterations. total_iterations = 0 degenerates to a plain sign decision.
    Accepts a length-N vector or an (N, nsym) batch.
    """
    if total_iterations < 0:
        raise ValueError("total_iterations must be >= 0")
    demuxed = np.asarray(demuxed, dtype=np.float64)
    single = demuxed.ndim == 1
    rx = demuxed[:, None] if single else demuxed
    cme = corr - np.eye(corr.shape[0])
    out = accel.detect_batch(rx, cme, total_iterations)
    return out[:, 0] if single else out


def pam_demap(symbols: np.ndarray, pam_order: int) -> np.ndarray:
    """Nearest-level decision back to bits (inverse of pam_map)."""
    symbols = np.asarray(symbols, dtype=np.float64).ravel()
    levels = pam_levels(pam_order)
    idx = np.argmin(np.abs(symbols[:, None] - levels[None, :]), axis=1)
    nb = int(np.log2(pam_order))
    bits = (idx[:, None] >> np.arange(nb - 1, -1, -1)) & 1
    return bits.ravel()


def decode(
    rx_waveform,
    config: FrameConfig,
    tx: TxOutput,
    rx_basis: FrctBasis,
    rx_corr: np.ndarray,
    iterations: int = 20,
) -> np.ndarray:
    """Run the full receive chain on a received batch, returning payload bits.

    The receiver knows the transmitted training block, the bias metadata
    (DC level, clipping attenuation) and the frame layout; frame timing
    is assumed ideal. rx_basis/rx_corr may be built at a deviated alpha
    to model a mismatched (eavesdropping) receiver.
    """
    n = config.n_subcarriers
    sym_len = n + config.cp_len
    n_train = config.training_symbols_per_frame
    syms_per_frame = n_train + config.payload_symbols_per_frame
    expected = config.n_frames * syms_per_frame * sym_len
    samples = rx_waveform.samples
    if samples.size != expected:
        raise ValueError(f"expected {expected} samples, got {samples.size}")

    blocks = samples.reshape(config.n_frames, syms_per_frame, sym_len)[:, :, config.cp_len:]
    train_rx = blocks[:, :n_train, :].reshape(-1, n)
    payload_rx = blocks[:, n_train:, :].reshape(-1, n).T  # (N, nsym)

    train_ref = np.fft.fft(tx.training_time, axis=1)
    est = estimate_channel(train_rx, np.tile(train_ref, (config.n_frames, 1)))

    eq = equalize(payload_rx, est)
    demuxed = frct((eq - tx.dc_level) / _clip_gain(tx), rx_basis)
    decided = iterative_detect(demuxed, rx_corr, iterations)
    return pam_demap(decided.T.ravel(), config.pam_order)


def _clip_gain(tx: TxOutput) -> float:
    """Amplitude attenuation the clipping applies to the zero-mean signal
    part, sqrt(Phi(b_dc/sigma))."""
    from .analysis import attenuation_factor

    return max(1e-12, attenuation_factor(tx.sigma, tx.bias.b_dc))
