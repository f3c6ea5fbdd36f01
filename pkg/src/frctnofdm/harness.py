"""Monte-Carlo engine: runs TX -> channel -> RX per configuration point,
counts payload bit errors, sweeps parameter grids, and post-processes BER
curves into required-SNR metrics.

Every point derives its own RNG streams from (master_seed, point_index),
so results are independent of execution order and parallelism degree.
"""
import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict, replace

import numpy as np

from .channel import ChannelModel, apply_channel, add_awgn, effective_taps
from .frct import make_basis, correlation_matrix
from .rxchain import decode
from .txchain import FrameConfig, build_frames

FEC_BER_THRESHOLD = 3.8e-3  # 7% hard-decision FEC limit


@dataclass(frozen=True)
class SweepSpec:
    base_config: FrameConfig
    channel: ChannelModel
    snr_grid_db: tuple = (float("inf"),)
    alpha_grid: tuple = ()
    delta_alpha_grid: tuple = (0.0,)
    iteration_grid: tuple = (20,)
    dc_bias_grid_db: tuple = ()
    master_seed: int = 1
    fec_ber_threshold: float = FEC_BER_THRESHOLD

    def __post_init__(self):
        if not self.snr_grid_db or not self.delta_alpha_grid or not self.iteration_grid:
            raise ValueError("sweep grids must be nonempty")
        if not 0.0 < self.fec_ber_threshold < 0.5:
            raise ValueError("fec_ber_threshold must be in (0, 0.5)")

    def grid(self):
        """Canonically ordered Cartesian product of the active grids."""
        alphas = self.alpha_grid or (self.base_config.alpha,)
        biases = self.dc_bias_grid_db or (self.base_config.dc_bias_db,)
        points = []
        idx = 0
        for alpha in alphas:
            for bias in biases:
                for iters in self.iteration_grid:
                    for dalpha in self.delta_alpha_grid:
                        for snr in self.snr_grid_db:
                            points.append((idx, alpha, bias, iters, dalpha, snr))
                            idx += 1
        return points


@dataclass(frozen=True)
class BerRecord:
    point_index: int
    alpha: float
    delta_alpha: float
    snr_db: float
    dc_bias_db: float
    iterations: int
    channel_kind: str
    rms_delay_spread_s: float
    seed: int
    bits_tested: int
    bit_errors: int
    ber: float
    wall_time_s: float = field(compare=False)


def point_seed(master_seed: int, point_index: int) -> int:
    """Stable per-point seed; adding grid points never perturbs existing ones."""
    return int(
        np.random.SeedSequence((master_seed, point_index)).generate_state(1)[0]
    )


def run_point(
    config: FrameConfig,
    channel: ChannelModel,
    snr_db: float,
    seed: int,
    iterations: int = 20,
    delta_alpha: float = 0.0,
    point_index: int = 0,
) -> BerRecord:
    """Simulate one Monte-Carlo point end to end. Deterministic given
    (config, channel, snr_db, seed)."""
    t0 = time.perf_counter()
    bit_ss, noise_ss = np.random.SeedSequence(seed).spawn(2)
    rng = np.random.default_rng(bit_ss)
    payload_bits = rng.integers(0, 2, size=config.payload_bits)

    tx_basis = make_basis(config.n_subcarriers, config.alpha)
    tx = build_frames(payload_bits, config, tx_basis)

    taps = effective_taps(channel, config.sample_rate)
    rx_wave = apply_channel(tx.waveform, taps)
    rx_wave = add_awgn(rx_wave, snr_db, int(noise_ss.generate_state(1)[0]))

    rx_alpha = config.alpha + delta_alpha
    if not 0.0 < rx_alpha <= 1.0:
        raise ValueError(f"receiver alpha {rx_alpha} outside (0, 1]")
    if delta_alpha == 0.0:
        rx_basis = tx_basis
    else:
        rx_basis = make_basis(config.n_subcarriers, rx_alpha)
    rx_corr = correlation_matrix(rx_basis)

    decoded = decode(rx_wave, config, tx, rx_basis, rx_corr, iterations)
    errors = int(np.count_nonzero(decoded != payload_bits))
    return BerRecord(
        point_index=point_index,
        alpha=config.alpha,
        delta_alpha=delta_alpha,
        snr_db=snr_db,
        dc_bias_db=config.dc_bias_db,
        iterations=iterations,
        channel_kind=channel.kind.value,
        rms_delay_spread_s=channel.rms_delay_spread,
        seed=seed,
        bits_tested=int(payload_bits.size),
        bit_errors=errors,
        ber=errors / payload_bits.size,
        wall_time_s=time.perf_counter() - t0,
    )


def _run_spec_point(args):
    spec, point = args
    idx, alpha, bias, iters, dalpha, snr = point
    config = replace(spec.base_config, alpha=alpha, dc_bias_db=bias)
    return run_point(
        config,
        spec.channel,
        snr,
        seed=point_seed(spec.master_seed, idx),
        iterations=iters,
        delta_alpha=dalpha,
        point_index=idx,
    )


def sweep(spec: SweepSpec, jobs: int = 1) -> list:
    """Run every grid point; records are returned in canonical grid order
    regardless of the parallelism degree."""
    points = spec.grid()
    if jobs > 1:
        # spawn, not fork: the numba runtime in the parent does not
        # survive forking once its threading layer is initialized
        import multiprocessing

        ctx = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx) as pool:
            records = list(pool.map(_run_spec_point, [(spec, p) for p in points]))
    else:
        records = [_run_spec_point((spec, p)) for p in points]
    return sorted(records, key=lambda r: r.point_index)


def required_snr(records, fec_threshold: float = FEC_BER_THRESHOLD):
    """Required SNR at the FEC threshold, by log-linear interpolation.

    Records must belong to one curve, sorted by SNR. Zero-BER points are
    floored at 1/(2*bits_tested) for interpolation only. Returns the dB
    value, or None if the curve never crosses the threshold.
    """
    records = sorted(records, key=lambda r: r.snr_db)
    if len(records) < 2:
        raise ValueError("need at least two records to interpolate")
    snrs = np.array([r.snr_db for r in records])
    bers = np.array([max(r.ber, 0.5 / r.bits_tested) for r in records])
    log_t = math.log10(fec_threshold)
    for i, r in enumerate(records):
        if bers[i] <= fec_threshold:
            if i == 0:
                return float(snrs[0])
            lo, hi = math.log10(bers[i - 1]), math.log10(bers[i])
            if lo == hi:
                return float(snrs[i])
            frac = (log_t - lo) / (hi - lo)
            return float(snrs[i - 1] + frac * (snrs[i] - snrs[i - 1]))
    return None


def security_sweep(
    config: FrameConfig,
    channel: ChannelModel,
    delta_alpha_grid,
    snr_db: float = 28.0,
    master_seed: int = 1,
    iterations: int = 20,
    jobs: int = 1,
) -> list:
    """BER vs receiver alpha deviation at fixed transmitter alpha and SNR."""
    spec = SweepSpec(
        base_config=config,
        channel=channel,
        snr_grid_db=(snr_db,),
        delta_alpha_grid=tuple(delta_alpha_grid),
        iteration_grid=(iterations,),
        master_seed=master_seed,
    )
    return sweep(spec, jobs=jobs)


CSV_COLUMNS = [
    "point_index",
    "alpha",
    "delta_alpha",
    "snr_db",
    "dc_bias_db",
    "iterations",
    "channel_kind",
    "rms_delay_spread_s",
    "seed",
    "bits_tested",
    "bit_errors",
    "ber",
]


def write_records_csv(records, path) -> None:
    """One row per record, fixed column order. Wall time is excluded so
    reruns with the same master seed are byte-identical."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            row = asdict(r)
            writer.writerow([repr(row[c]) if isinstance(row[c], float) else row[c]
                             for c in CSV_COLUMNS])


def write_summary_json(path, records, spec=None, extra=None) -> None:
    payload = {
        "n_records": len(records),
        "records": [
            {c: asdict(r)[c] for c in CSV_COLUMNS} for r in records
        ],
    }
    if spec is not None:
        payload["master_seed"] = spec.master_seed
        payload["fec_ber_threshold"] = spec.fec_ber_threshold
    if extra:
        payload.update(extra)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, default=str)
