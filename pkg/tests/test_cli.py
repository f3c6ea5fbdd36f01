import json
import os

import pytest

from frctnofdm.cli import main


def run_cli(args):
    return main(args)


def test_dry_run_prints_manifest(capsys, tmp_path):
    rc = run_cli(["sweep", "--figure", "fig7", "--dry-run", "--out-dir", str(tmp_path)])
    assert rc == 0
    manifest = json.loads(capsys.readouterr().out)
    assert manifest["figure"] == "fig7"
    assert manifest["settings"]["alphas"] == [1.0, 0.9, 0.8, 0.7]
    assert not any(tmp_path.iterdir())  # nothing computed


def test_missing_config_is_config_error(tmp_path, capsys):
    out = tmp_path / "out"
    rc = run_cli(["sweep", "--config", str(tmp_path / "nope.toml"), "--out-dir", str(out)])
    assert rc == 1
    assert not out.exists()
    assert "configuration error" in capsys.readouterr().err


def test_invalid_toml_is_config_error(tmp_path):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("alphas = [0.9")
    assert run_cli(["sweep", "--config", str(cfg), "--out-dir", str(tmp_path / "o")]) == 1


def test_unknown_config_key_rejected(tmp_path):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("not_a_key = 1\n")
    assert run_cli(["sweep", "--config", str(cfg), "--out-dir", str(tmp_path / "o")]) == 1


def test_figure_subcommand_mismatch(tmp_path):
    assert run_cli(["sweep", "--figure", "fig12", "--out-dir", str(tmp_path)]) == 1


def test_single_point_sweep_artifacts(tmp_path):
    cfg = tmp_path / "cfg.toml"
    cfg.write_text(
        "alphas = [0.9]\nsnr_db = [24.0]\n\n"
        "[frame]\nn_frames = 1\npayload_symbols_per_frame = 8\n"
    )
    out = tmp_path / "out"
    rc = run_cli(["sweep", "--config", str(cfg), "--out-dir", str(out), "--seed", "3"])
    assert rc == 0
    rows = (out / "sweep_records.csv").read_text().splitlines()
    assert len(rows) == 2  # header + one point
    summary = json.loads((out / "sweep_summary.json").read_text())
    assert summary["master_seed"] == 3
    manifest = json.loads((out / "manifest.json").read_text())
    assert str(out / "sweep_records.csv") in manifest["outputs"]
    svg = (out / "sweep_ber_vs_snr.svg").read_text()
    assert svg.startswith("<svg")


def test_out_dir_env_var(tmp_path, monkeypatch):
    from frctnofdm.cli import OUT_DIR_ENV

    out = tmp_path / "envout"
    monkeypatch.setenv(OUT_DIR_ENV, str(out))
    cfg = tmp_path / "cfg.toml"
    cfg.write_text("channel = \"awgn\"\n")
    rc = run_cli(["channel", "--config", str(cfg)])
    assert rc == 0
    summary = json.loads((out / "channel_summary.json").read_text())
    assert summary["awgn_d3.0ns_3db_bandwidth"] == "unbounded"


def test_channel_command_reports_reference_bandwidth(tmp_path):
    rc = run_cli(["channel", "--out-dir", str(tmp_path), "--d-ns", "3.0", "--taps"])
    assert rc == 0
    summary = json.loads((tmp_path / "channel_summary.json").read_text())
    assert summary["cb_d3.0ns_3db_bandwidth_mhz"] == pytest.approx(20.9, abs=0.3)
    assert (tmp_path / "channel_cb_d3.0ns_taps.csv").exists()
    assert (tmp_path / "channel_transfer.svg").exists()


def test_stats_command(tmp_path):
    rc = run_cli(["stats", "--out-dir", str(tmp_path), "--bias", "0", "--bias", "7"])
    assert rc == 0
    summary = json.loads((tmp_path / "stats_summary.json").read_text())
    table = summary["clipped_power_table"]
    assert table[0]["power_analytic"] == pytest.approx(0.5)
    for row in table:
        assert row["power_mc"] == pytest.approx(row["power_analytic"], rel=0.01)
    assert summary["gaussianity_ks"] < 0.01


def test_security_empty_grid_rejected(tmp_path):
    cfg = tmp_path / "cfg.toml"
    cfg.write_text("delta_alpha = []\n")
    assert run_cli(["security", "--config", str(cfg), "--out-dir", str(tmp_path / "o")]) == 1


def test_spectrum_command(tmp_path):
    cfg = tmp_path / "cfg.toml"
    cfg.write_text("alphas = [1.0]\n\n[frame]\nn_frames = 1\npayload_symbols_per_frame = 32\n")
    rc = run_cli(["spectrum", "--config", str(cfg), "--out-dir", str(tmp_path / "o")])
    assert rc == 0
    csv = (tmp_path / "o" / "spectrum_psd_alpha1.0.csv").read_text().splitlines()
    freqs = [float(line.split(",")[0]) for line in csv[1:]]
    assert max(freqs) == pytest.approx(50e6)


def test_svg_outputs_are_deterministic(tmp_path):
    cfg = tmp_path / "cfg.toml"
    cfg.write_text(
        "alphas = [0.9]\nsnr_db = [22.0, 24.0]\n\n"
        "[frame]\nn_frames = 1\npayload_symbols_per_frame = 8\n"
    )
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert run_cli(["sweep", "--config", str(cfg), "--out-dir", str(out)]) == 0
        outs.append((out / "sweep_ber_vs_snr.svg").read_bytes())
    assert outs[0] == outs[1]
