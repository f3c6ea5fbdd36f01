"""Transmitter chain: bits -> PAM -> multiplexing -> CP -> framing -> DC bias/clip.

Produces the unipolar real waveform required by an intensity-modulated
optical front end, plus the metadata the receiver needs (training symbols,
bias level, measured signal power).
"""
from dataclasses import dataclass, field

import numpy as np

from .frct import FrctBasis, ifrct


@dataclass(frozen=True)
class FrameConfig:
    n_subcarriers: int = 256
    alpha: float = 1.0
    cp_len: int = 16
    pam_order: int = 2
    dc_bias_db: float = 7.0
    bit_rate: float = 1e8
    payload_symbols_per_frame: int = 256
    training_symbols_per_frame: int = 10
    n_frames: int = 8
    training_seed: int = 20170901

    def __post_init__(self):
        if self.cp_len >= self.n_subcarriers or self.cp_len < 0:
            raise ValueError("cp_len must be in [0, n_subcarriers)")
        m = self.pam_order
        if m < 2 or (m & (m - 1)) != 0:
            raise ValueError(f"pam_order must be a power of two >= 2, got {m}")
        for name in ("n_subcarriers", "payload_symbols_per_frame", "n_frames"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.training_symbols_per_frame < 0:
            raise ValueError("training_symbols_per_frame must be >= 0")
        if self.bit_rate <= 0:
            raise ValueError("bit_rate must be positive")

    @property
    def bits_per_symbol(self) -> int:
        return int(np.log2(self.pam_order))

    @property
    def sample_rate(self) -> float:
        """Samples per second; equals the subcarrier symbol rate."""
        return self.bit_rate / self.bits_per_symbol

    @property
    def symbol_duration(self) -> float:
        """Duration of one multiplexed symbol, CP excluded (seconds)."""
        return self.n_subcarriers / self.sample_rate

    @property
    def payload_bits(self) -> int:
        return (
            self.n_frames
            * self.payload_symbols_per_frame
            * self.n_subcarriers
            * self.bits_per_symbol
        )


@dataclass(frozen=True)
class DcBias:
    """DC bias sized in dB: bias_db = 10*log10(k^2 + 1), b_dc = k*sigma."""

    k_factor: float
    bias_db: float
    b_dc: float

    @classmethod
    def from_db(cls, bias_db: float, signal_power: float) -> "DcBias":
        if signal_power < 0:
            raise ValueError("signal_power must be >= 0")
        k = np.sqrt(10.0 ** (bias_db / 10.0) - 1.0)
        return cls(float(k), float(bias_db), float(k * np.sqrt(signal_power)))


@dataclass(frozen=True)
class Waveform:
    samples: np.ndarray
    sample_rate: float

    def __post_init__(self):
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("waveform contains non-finite samples")


@dataclass(frozen=True)
class TxOutput:
    """Transmit waveform plus the side information the receiver uses."""

    waveform: Waveform
    training_reference: np.ndarray  # (n_train, N) 2-PAM subcarrier amplitudes
    training_time: np.ndarray  # (n_train, N) transmitted clipped samples, no CP
    bias: DcBias
    sigma: float  # RMS of the bipolar waveform before biasing
    dc_level: float  # empirical mean of the clipped waveform
    config: FrameConfig = field(repr=False, default=None)


def _gray_code(n: int) -> np.ndarray:
    return np.arange(n) ^ (np.arange(n) >> 1)


def pam_levels(pam_order: int) -> np.ndarray:
    """Unit-power PAM levels in Gray-code bit order (index = bit pattern)."""
    m = pam_order
    if m < 2 or (m & (m - 1)) != 0:
        raise ValueError(f"pam_order must be a power of two >= 2, got {m}")
    raw = 2.0 * np.arange(m) - (m - 1)  # -(M-1), ..., +(M-1)
    raw /= np.sqrt(np.mean(raw**2))
    levels = np.empty(m)
    levels[_gray_code(m)] = raw
    return levels


def pam_map(bits: np.ndarray, pam_order: int) -> np.ndarray:
    """Map bits to Gray-coded unit-power PAM amplitudes (2-PAM: 0->-1, 1->+1)."""
    bits = np.asarray(bits, dtype=np.int64)
    nb = int(np.log2(pam_order))
    if bits.size % nb != 0:
        raise ValueError(f"bit count {bits.size} not divisible by {nb}")
    idx = bits.reshape(-1, nb) @ (1 << np.arange(nb - 1, -1, -1))
    return pam_levels(pam_order)[idx]


def add_cp(symbol: np.ndarray, cp_len: int) -> np.ndarray:
    """Prepend the last cp_len samples as a cyclic prefix."""
    symbol = np.asarray(symbol)
    if cp_len >= symbol.shape[0]:
        raise ValueError("cp_len must be smaller than the symbol length")
    if cp_len == 0:
        return symbol.copy()
    return np.concatenate([symbol[-cp_len:], symbol])


def dc_bias_clip(waveform: Waveform, bias: DcBias) -> Waveform:
    """Add the DC bias and clip everything below zero (single-sided)."""
    s = np.maximum(waveform.samples + bias.b_dc, 0.0)
    return Waveform(s, waveform.sample_rate)


def training_symbols(config: FrameConfig) -> np.ndarray:
    """Seeded pseudorandom 2-PAM training block, identical in every frame."""
    rng = np.random.default_rng(config.training_seed)
    n_train = config.training_symbols_per_frame
    return rng.choice(
        [-1.0, 1.0], size=(n_train, config.n_subcarriers)
    )


def build_frames(
    payload_bits: np.ndarray, config: FrameConfig, basis: FrctBasis
) -> TxOutput:
    """Assemble the full transmit batch.

    Each frame carries the training symbols first, then the payload
    symbols; every symbol is multiplexed and CP-extended. The
    concatenated frames are biased and clipped once as a batch, with the
    bias amplitude derived from the measured power of the bipolar signal.
    """
    payload_bits = np.asarray(payload_bits, dtype=np.int64)
    if payload_bits.size != config.payload_bits:
        raise ValueError(
            f"expected {config.payload_bits} payload bits, got {payload_bits.size}"
        )
    n = config.n_subcarriers
    train_freq = training_symbols(config)
    train_time = ifrct(train_freq.T, basis).T  # (n_train, N)
    train_cp = (
        np.hstack([train_time[:, n - config.cp_len:], train_time])
        if config.cp_len
        else train_time
    )

    symbols = pam_map(payload_bits, config.pam_order).reshape(
        config.n_frames, config.payload_symbols_per_frame, n
    )
    frames = []
    for f in range(config.n_frames):
        payload_time = ifrct(symbols[f].T, basis).T
        payload_cp = (
            np.hstack([payload_time[:, n - config.cp_len:], payload_time])
            if config.cp_len
            else payload_time
        )
        frames.append(np.concatenate([train_cp.ravel(), payload_cp.ravel()]))
    bipolar = np.concatenate(frames)

    sigma = float(np.sqrt(np.mean(bipolar**2)))
    bias = DcBias.from_db(config.dc_bias_db, sigma**2)
    unipolar = dc_bias_clip(Waveform(bipolar, config.sample_rate), bias)
    clipped_train = np.maximum(train_time + bias.b_dc, 0.0)
    return TxOutput(
        waveform=unipolar,
        training_reference=train_freq,
        training_time=clipped_train,
        bias=bias,
        sigma=sigma,
        dc_level=float(np.mean(unipolar.samples)),
        config=config,
    )
