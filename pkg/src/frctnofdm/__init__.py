"""Faster-than-Nyquist FrCT-NOFDM transceiver simulator for
intensity-modulated optical-wireless links."""

__version__ = "0.1.0"

from .frct import FrctBasis, make_basis, ifrct, frct, correlation_matrix
from .txchain import FrameConfig, DcBias, Waveform, pam_map, add_cp, dc_bias_clip, build_frames
from .channel import ChannelModel, ChannelKind, FirTaps, impulse_taps, effective_taps, transfer_function, three_db_bandwidth, apply_channel, add_awgn
from .rxchain import ChannelEstimate, remove_cp, estimate_channel, equalize, iterative_detect, pam_demap, decode
from .analysis import RateSpec, rate_spec, q_function, clipped_pdf, clipped_power, attenuation_factor, gaussianity_ks, psd_estimate
from .harness import SweepSpec, BerRecord, run_point, sweep, required_snr, security_sweep, FEC_BER_THRESHOLD
