"""Command-line front end.

Subcommands (sweep / channel / stats / security / spectrum) reproduce the
reference figures as CSV + JSON + SVG artifacts. Configuration comes from
defaults, an optional TOML file, and command-line overrides, in that
order. Exit codes: 0 success, 1 configuration error, 2 runtime error.
"""
import argparse
import dataclasses
import json
import os
import sys
import time
from dataclasses import dataclass, replace

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .analysis import (
    clipped_power,
    attenuation_factor,
    q_function,
    clipped_pdf,
    gaussianity_ks,
    psd_estimate,
    export_xy_csv,
)
from .channel import (
    ChannelKind,
    ChannelModel,
    MEASURED_HOLD_INTERVAL,
    effective_taps,
    export_taps_csv,
    three_db_bandwidth,
    transfer_function,
)
from .frct import make_basis
from .harness import (
    FEC_BER_THRESHOLD,
    SweepSpec,
    required_snr,
    sweep,
    write_records_csv,
    write_summary_json,
)
from .svgplot import write_chart
from .txchain import FrameConfig, build_frames
from .frct import ifrct

OUT_DIR_ENV = "FRCTNOFDM_OUT_DIR"

SNR_DEFAULT = tuple(float(s) for s in range(16, 31, 2))

FIGURE_PRESETS = {
    # channel transfer functions of both multipath models
    "fig4": {"command": "channel", "d_ns": 3.0},
    # post-channel signal spectra per alpha with the CB transfer overlay
    "fig5": {"command": "spectrum", "alphas": (1.0, 0.9, 0.8, 0.7)},
    "fig7": {"command": "sweep", "alphas": (1.0, 0.9, 0.8, 0.7), "snr_db": SNR_DEFAULT},
    "fig8": {
        "command": "sweep",
        "alphas": (1.0, 0.9),
        "d_ns_grid": (1.5, 3.0, 6.0, 9.0),
        "snr_db": tuple(float(s) for s in range(18, 33, 2)),
    },
    # same sweep as fig8, summarized as required SNR vs delay spread
    "fig9": {
        "command": "sweep",
        "alphas": (1.0, 0.9),
        "d_ns_grid": (1.5, 3.0, 6.0, 9.0),
        "snr_db": tuple(float(s) for s in range(18, 33, 2)),
        "required_snr_vs_d": True,
    },
    "fig10": {"command": "sweep", "alphas": (0.9,), "bias_db": (4.0, 7.0, 10.0), "snr_db": SNR_DEFAULT},
    "fig11": {"command": "sweep", "alphas": (0.8,), "iterations": (0, 5, 10, 20), "snr_db": SNR_DEFAULT},
    "fig12": {
        "command": "security",
        "delta_alpha": (0.0, 0.0005, 0.001, 0.002, 0.003, 0.004, 0.005),
        "snr_db": (28.0,),
        "alphas": (0.9,),
    },
}


class ConfigError(Exception):
    pass


@dataclass
class RunManifest:
    version: str
    command: str
    figure: str
    settings: dict
    master_seed: int
    out_dir: str
    outputs: list
    created_utc: str = ""

    def write(self, path):
        with open(path, "w") as fh:
            json.dump(dataclasses.asdict(self), fh, indent=2, default=str)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="frctnofdm", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="TOML configuration file")
        sp.add_argument("--out-dir", help=f"output directory (default ${OUT_DIR_ENV} or ./out)")
        sp.add_argument("--seed", type=int, help="master seed")
        sp.add_argument("--jobs", type=int, help="parallel worker processes")
        sp.add_argument("--dry-run", action="store_true", help="print the resolved manifest and exit")
        sp.add_argument("--figure", choices=sorted(FIGURE_PRESETS), help="figure preset")

    def grids(sp):
        sp.add_argument("--alpha", type=float, action="append", help="compression factor (repeatable)")
        sp.add_argument("--snr", type=float, action="append", help="SNR in dB (repeatable)")
        sp.add_argument("--bias", type=float, action="append", help="DC bias in dB (repeatable)")
        sp.add_argument("--iters", type=int, action="append", help="ID iterations (repeatable)")
        sp.add_argument("--delta-alpha", type=float, action="append", help="receiver alpha deviation (repeatable)")
        sp.add_argument("--channel", choices=[k.value for k in ChannelKind], help="channel model")
        sp.add_argument("--d-ns", type=float, action="append", help="RMS delay spread in ns (repeatable)")

    for name in ("sweep", "security"):
        sp = sub.add_parser(name)
        common(sp)
        grids(sp)
    sp = sub.add_parser("channel")
    common(sp)
    sp.add_argument("--channel", choices=[k.value for k in ChannelKind])
    sp.add_argument("--d-ns", type=float, action="append")
    sp.add_argument("--taps", action="store_true", help="also export discrete taps CSV")
    sp = sub.add_parser("stats")
    common(sp)
    sp.add_argument("--bias", type=float, action="append")
    sp = sub.add_parser("spectrum")
    common(sp)
    sp.add_argument("--alpha", type=float, action="append")
    sp.add_argument("--d-ns", type=float, action="append")
    return p


def _load_toml(path) -> dict:
    if path is None:
        return {}
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"invalid TOML in {path}: {e}") from e


def resolve_settings(args) -> dict:
    """Merge defaults <- preset <- config file <- flags into one dict."""
    preset = FIGURE_PRESETS.get(getattr(args, "figure", None) or "", {})
    if preset and preset["command"] != args.command:
        raise ConfigError(
            f"--figure {args.figure} belongs to the '{preset['command']}' subcommand"
        )
    s = {
        "frame": dataclasses.asdict(FrameConfig()),
        "channel": "cb",
        "d_ns_grid": (3.0,),
        "alphas": (FrameConfig().alpha,),
        "snr_db": SNR_DEFAULT,
        "bias_db": (),
        "iterations": (20,),
        "delta_alpha": (0.0,),
        "master_seed": 1,
        "jobs": 1,
        "required_snr_vs_d": False,
        "d_ns": 3.0,
    }
    for k, v in preset.items():
        if k != "command":
            s[k] = v
    cfg = _load_toml(getattr(args, "config", None))
    for k, v in cfg.items():
        if k == "frame":
            unknown = set(v) - set(s["frame"])
            if unknown:
                raise ConfigError(f"unknown frame keys: {sorted(unknown)}")
            s["frame"].update(v)
        elif k in s:
            s[k] = tuple(v) if isinstance(v, list) else v
        else:
            raise ConfigError(f"unknown config key: {k}")
    flag_map = {
        "alpha": "alphas",
        "snr": "snr_db",
        "bias": "bias_db",
        "iters": "iterations",
        "delta_alpha": "delta_alpha",
        "channel": "channel",
        "seed": "master_seed",
        "jobs": "jobs",
    }
    for flag, key in flag_map.items():
        v = getattr(args, flag, None)
        if v is not None:
            s[key] = tuple(v) if isinstance(v, list) else v
    d_ns = getattr(args, "d_ns", None)
    if d_ns is not None:
        s["d_ns_grid"] = tuple(d_ns)
        s["d_ns"] = d_ns[0]
    try:
        FrameConfig(**{**s["frame"], "alpha": s["alphas"][0]})
    except (ValueError, TypeError) as e:
        raise ConfigError(str(e)) from e
    return s


def _channel_model(kind_value: str, d_ns: float) -> ChannelModel:
    kind = ChannelKind(kind_value)
    return ChannelModel(kind, d_ns * 1e-9 if kind is not ChannelKind.AWGN_ONLY else 0.0)


def _out_dir(args) -> str:
    return args.out_dir or os.environ.get(OUT_DIR_ENV) or "out"


def _prefix(args) -> str:
    return (getattr(args, "figure", None) or args.command) + "_"


def cmd_sweep(args, s, out_dir, manifest):
    pre = _prefix(args)
    records = []
    summaries = {}
    try:
        for d_ns in s["d_ns_grid"]:
            channel = _channel_model(s["channel"], d_ns)
            spec = SweepSpec(
                base_config=FrameConfig(**s["frame"]),
                channel=channel,
                snr_grid_db=tuple(s["snr_db"]),
                alpha_grid=tuple(s["alphas"]),
                delta_alpha_grid=tuple(s["delta_alpha"]),
                iteration_grid=tuple(s["iterations"]),
                dc_bias_grid_db=tuple(s["bias_db"]),
                master_seed=s["master_seed"],
            )
            recs = sweep(spec, jobs=s["jobs"])
            records.extend(recs)
            for alpha in s["alphas"]:
                for iters in s["iterations"]:
                    for bias in s["bias_db"] or (spec.base_config.dc_bias_db,):
                        curve = [
                            r
                            for r in recs
                            if r.alpha == alpha and r.iterations == iters and r.dc_bias_db == bias
                        ]
                        if len(curve) >= 2:
                            key = f"alpha={alpha} bias={bias} I={iters} D={d_ns}ns"
                            req = required_snr(curve)
                            summaries[key] = req if req is not None else "not reached"
    except KeyboardInterrupt:
        _flush_sweep(args, s, out_dir, manifest, records, summaries, pre)
        raise
    _flush_sweep(args, s, out_dir, manifest, records, summaries, pre)
    return 0


def _flush_sweep(args, s, out_dir, manifest, records, summaries, pre):
    csv_path = os.path.join(out_dir, pre + "records.csv")
    write_records_csv(records, csv_path)
    manifest.outputs.append(csv_path)
    json_path = os.path.join(out_dir, pre + "summary.json")
    write_summary_json(
        json_path,
        records,
        extra={
            "required_snr_db": summaries,
            "master_seed": s["master_seed"],
            "fec_ber_threshold": FEC_BER_THRESHOLD,
            "manifest": "manifest.json",
        },
    )
    manifest.outputs.append(json_path)
    if records:
        series = []
        for d_ns in s["d_ns_grid"]:
            for alpha in s["alphas"]:
                for iters in s["iterations"]:
                    for bias in s["bias_db"] or (records[0].dc_bias_db,):
                        curve = [
                            r
                            for r in records
                            if r.alpha == alpha
                            and r.iterations == iters
                            and r.dc_bias_db == bias
                            and abs(r.rms_delay_spread_s - d_ns * 1e-9) < 1e-15
                        ]
                        if curve:
                            label = f"a={alpha}"
                            if len(s["d_ns_grid"]) > 1:
                                label += f" D={d_ns}ns"
                            if len(s["iterations"]) > 1:
                                label += f" I={iters}"
                            if len(s["bias_db"]) > 1:
                                label += f" bias={bias}dB"
                            series.append(
                                (label, [r.snr_db for r in curve], [r.ber for r in curve])
                            )
        svg_path = os.path.join(out_dir, pre + "ber_vs_snr.svg")
        write_chart(
            svg_path,
            series,
            "SNR (dB)",
            "BER",
            y_log=True,
            guides=(FEC_BER_THRESHOLD,),
        )
        manifest.outputs.append(svg_path)
    if s.get("required_snr_vs_d") and records:
        series = []
        rows = []
        for alpha in s["alphas"]:
            ds, reqs = [], []
            for d_ns in s["d_ns_grid"]:
                curve = [
                    r
                    for r in records
                    if r.alpha == alpha and abs(r.rms_delay_spread_s - d_ns * 1e-9) < 1e-15
                ]
                req = required_snr(curve) if len(curve) >= 2 else None
                rows.append((alpha, d_ns, req))
                if req is not None:
                    ds.append(d_ns)
                    reqs.append(req)
            if ds:
                series.append((f"a={alpha}", ds, reqs))
        path = os.path.join(out_dir, pre + "required_snr_vs_d.csv")
        import csv as _csv

        with open(path, "w", newline="") as fh:
            w = _csv.writer(fh)
            w.writerow(["alpha", "rms_delay_spread_ns", "required_snr_db"])
            for alpha, d_ns, req in rows:
                w.writerow([alpha, d_ns, "not reached" if req is None else repr(req)])
        manifest.outputs.append(path)
        if series:
            svg = os.path.join(out_dir, pre + "required_snr_vs_d.svg")
            write_chart(svg, series, "RMS delay spread (ns)", "required SNR (dB)")
            manifest.outputs.append(svg)


def cmd_security(args, s, out_dir, manifest):
    if not s["delta_alpha"]:
        raise ConfigError("empty delta-alpha grid")
    pre = _prefix(args)
    from .harness import security_sweep

    config = FrameConfig(**{**s["frame"], "alpha": s["alphas"][0]})
    channel = _channel_model(s["channel"], s["d_ns_grid"][0])
    records = security_sweep(
        config,
        channel,
        tuple(s["delta_alpha"]),
        snr_db=float(s["snr_db"][0]),
        master_seed=s["master_seed"],
        iterations=int(s["iterations"][0]),
        jobs=s["jobs"],
    )
    csv_path = os.path.join(out_dir, pre + "records.csv")
    write_records_csv(records, csv_path)
    manifest.outputs.append(csv_path)
    jpath = os.path.join(out_dir, pre + "summary.json")
    write_summary_json(
        jpath,
        records,
        extra={
            "master_seed": s["master_seed"],
            "fec_ber_threshold": FEC_BER_THRESHOLD,
            "manifest": "manifest.json",
        },
    )
    manifest.outputs.append(jpath)
    svg = os.path.join(out_dir, pre + "ber_vs_delta_alpha.svg")
    write_chart(
        svg,
        [(f"a={config.alpha}", [r.delta_alpha for r in records], [r.ber for r in records])],
        "delta alpha",
        "BER",
        y_log=True,
        guides=(FEC_BER_THRESHOLD,),
    )
    manifest.outputs.append(svg)
    return 0


def cmd_channel(args, s, out_dir, manifest):
    pre = _prefix(args)
    freqs = np.linspace(0.0, 100e6, 1001)
    kinds = (
        [ChannelKind.EXP_DECAY, ChannelKind.CEILING_BOUNCE]
        if s["channel"] == "cb" and getattr(args, "figure", None) == "fig4"
        else [ChannelKind(s["channel"])]
    )
    summary = {"front_end_hold_s": MEASURED_HOLD_INTERVAL, "manifest": "manifest.json"}
    series = []
    columns = [freqs / 1e6]
    header = ["freq_mhz"]
    for kind in kinds:
        for d_ns in s["d_ns_grid"]:
            name = f"{kind.value}_d{d_ns}ns"
            if kind is ChannelKind.AWGN_ONLY:
                summary[name + "_3db_bandwidth"] = "unbounded"
                continue
            model = _channel_model(kind.value, d_ns)
            db = transfer_function(
                model, freqs, front_end_interval=MEASURED_HOLD_INTERVAL
            )
            columns.append(db)
            header.append(name + "_db")
            series.append((name, freqs / 1e6, db))
            summary[name + "_3db_bandwidth_mhz"] = (
                three_db_bandwidth(
                    model, resolution=1e3, front_end_interval=MEASURED_HOLD_INTERVAL
                )
                / 1e6
            )
            if getattr(args, "taps", False):
                taps = effective_taps(model, FrameConfig().sample_rate)
                tpath = os.path.join(out_dir, pre + name + "_taps.csv")
                export_taps_csv(taps, tpath)
                manifest.outputs.append(tpath)
    import csv as _csv

    path = os.path.join(out_dir, pre + "transfer.csv")
    with open(path, "w", newline="") as fh:
        w = _csv.writer(fh)
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([repr(float(v)) for v in row])
    manifest.outputs.append(path)
    jpath = os.path.join(out_dir, pre + "summary.json")
    with open(jpath, "w") as fh:
        json.dump(summary, fh, indent=2)
    manifest.outputs.append(jpath)
    if series:
        svg = os.path.join(out_dir, pre + "transfer.svg")
        write_chart(svg, series, "frequency (MHz)", "|H(f)| (dB)", guides=(-3.0,))
        manifest.outputs.append(svg)
    return 0


def cmd_stats(args, s, out_dir, manifest):
    pre = _prefix(args)
    rng = np.random.default_rng(s["master_seed"])
    biases = s["bias_db"] or (0.0, 4.0, 7.0, 10.0, 13.0)
    sigma = 1.0
    rows = []
    for bias_db in biases:
        k = float(np.sqrt(10.0 ** (bias_db / 10.0) - 1.0)) if bias_db > 0 else 0.0
        b = k * sigma
        analytic = clipped_power(sigma, b)
        x = np.maximum(rng.standard_normal(1_000_000) * sigma + b, 0.0)
        mc = float(np.mean(x**2))
        rows.append(
            {
                "bias_db": bias_db,
                "b_dc": b,
                "power_analytic": analytic,
                "power_mc": mc,
                "attenuation": attenuation_factor(sigma, b),
                "clip_probability": q_function(b / sigma),
            }
        )
    config = FrameConfig(alpha=0.8)
    basis = make_basis(config.n_subcarriers, config.alpha)
    symbols = rng.choice([-1.0, 1.0], size=(config.n_subcarriers, 512))
    samples = ifrct(symbols, basis).ravel()
    ks = gaussianity_ks(samples)
    xs = np.linspace(-4.0, 4.0, 401)
    density, mass = clipped_pdf(xs + 2.0, 1.0, 2.0)
    path = os.path.join(out_dir, pre + "clipped_pdf.csv")
    export_xy_csv(path, xs + 2.0, density, header=("x", "density"))
    manifest.outputs.append(path)
    jpath = os.path.join(out_dir, pre + "summary.json")
    with open(jpath, "w") as fh:
        json.dump(
            {
                "clipped_power_table": rows,
                "gaussianity_ks": ks,
                "ks_samples": int(samples.size),
                "clip_point_mass_example": mass,
                "manifest": "manifest.json",
            },
            fh,
            indent=2,
        )
    manifest.outputs.append(jpath)
    return 0


def cmd_spectrum(args, s, out_dir, manifest):
    pre = _prefix(args)
    config = FrameConfig(**s["frame"])
    channel = _channel_model(s["channel"], s["d_ns_grid"][0])
    rng = np.random.default_rng(s["master_seed"])
    series = []
    from .channel import apply_channel

    for alpha in s["alphas"]:
        cfg = replace(config, alpha=alpha)
        bits = rng.integers(0, 2, size=cfg.payload_bits)
        tx = build_frames(bits, cfg, make_basis(cfg.n_subcarriers, alpha))
        taps = effective_taps(channel, cfg.sample_rate)
        rx = apply_channel(tx.waveform, taps)
        freqs, db = psd_estimate(rx)
        series.append((f"a={alpha}", freqs / 1e6, db))
        path = os.path.join(out_dir, pre + f"psd_alpha{alpha}.csv")
        export_xy_csv(path, freqs, db, header=("freq_hz", "psd_db"))
        manifest.outputs.append(path)
    if channel.kind is not ChannelKind.AWGN_ONLY:
        f = np.linspace(0.0, config.sample_rate / 2.0, 501)
        tf = transfer_function(channel, f)
        series.append(("channel", f / 1e6, tf))
    svg = os.path.join(out_dir, pre + "spectrum.svg")
    write_chart(svg, series, "frequency (MHz)", "PSD (dB)")
    manifest.outputs.append(svg)
    return 0


COMMANDS = {
    "sweep": cmd_sweep,
    "security": cmd_security,
    "channel": cmd_channel,
    "stats": cmd_stats,
    "spectrum": cmd_spectrum,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = resolve_settings(args)
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 1
    out_dir = _out_dir(args)
    manifest = RunManifest(
        version=__version__,
        command=args.command,
        figure=getattr(args, "figure", None) or "",
        settings={k: list(v) if isinstance(v, tuple) else v for k, v in settings.items()},
        master_seed=settings["master_seed"],
        out_dir=out_dir,
        outputs=[],
    )
    if args.dry_run:
        print(json.dumps(dataclasses.asdict(manifest), indent=2, default=str))
        return 0
    os.makedirs(out_dir, exist_ok=True)
    manifest.created_utc = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    try:
        rc = COMMANDS[args.command](args, settings, out_dir, manifest)
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        manifest.write(os.path.join(out_dir, "manifest.json"))
        print("interrupted; partial results flushed", file=sys.stderr)
        return 2
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    manifest.write(os.path.join(out_dir, "manifest.json"))
    return rc


if __name__ == "__main__":
    sys.exit(main())
