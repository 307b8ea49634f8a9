import json
import math

import numpy as np
import pytest

from dereverb import read_wav, si_sdr
from dereverb.cli import (EXIT_CONFIG, EXIT_IO, EXIT_OK, cmd_dereverb,
                          cmd_evaluate, cmd_simulate, main, run_experiment)


def simulate_args(out_dir, **overrides):
    config = {
        "out_dir": str(out_dir), "sample_rate": 8000, "duration_s": 1.5,
        "seed": 3, "t60": 0.4, "snr_db": 20.0,
    }
    config.update(overrides)
    return config


# ---------------------------------------------------------------------------
# simulate

def test_simulate_deterministic_bytes(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    cmd_simulate(simulate_args(a))
    cmd_simulate(simulate_args(b))
    for name in ("y.wav", "s.wav", "h.wav", "v.wav"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_manifest_snr_matches_files(tmp_path):
    manifest = cmd_simulate(simulate_args(tmp_path))
    s, _ = read_wav(manifest["files"]["s"])
    noise, _ = read_wav(manifest["files"]["noise"])
    recomputed = 10 * math.log10(np.sum(s ** 2) / np.sum(noise ** 2))
    assert abs(recomputed - manifest["measured_snr_db"]) < 1e-6
    assert abs(manifest["measured_snr_db"] - 20.0) < 1e-9


def test_simulate_t60_zero_gives_silent_reverb(tmp_path):
    manifest = cmd_simulate(simulate_args(tmp_path, t60=0.0, snr_db=None))
    h, _ = read_wav(manifest["files"]["h"])
    assert np.all(h == 0)


def test_simulate_two_sources_writes_components(tmp_path):
    manifest = cmd_simulate(simulate_args(tmp_path, n_sources=2, snr_db=None))
    assert {"s0", "h0", "s1", "h1"} <= set(manifest["files"])
    y, _ = read_wav(manifest["files"]["y"])
    parts = [read_wav(manifest["files"][k])[0] for k in ("s0", "h0", "s1", "h1")]
    np.testing.assert_allclose(y, np.sum(parts, axis=0), atol=1e-6)


# ---------------------------------------------------------------------------
# dereverb

@pytest.fixture()
def scene_dir(tmp_path):
    out = tmp_path / "scene"
    cmd_simulate(simulate_args(out, duration_s=2.0, snr_db=None, seed=5))
    return out


def test_dereverb_fcp_oracle_improves(scene_dir, tmp_path):
    report = cmd_dereverb({
        "mixture": str(scene_dir / "y.wav"),
        "reference": str(scene_dir / "s.wav"),
        "algorithm": "fcp", "estimate_mode": "oracle",
        "output": str(tmp_path / "out.wav"),
        "report": str(tmp_path / "report.json"),
    })
    m = report["metrics"][0]
    assert m["enhanced"]["si_sdr_db"] > m["unprocessed"]["si_sdr_db"]
    on_disk = json.loads((tmp_path / "report.json").read_text())
    assert on_disk["metrics"][0]["enhanced"]["si_sdr_db"] == m["enhanced"]["si_sdr_db"]
    out, fs = read_wav(tmp_path / "out.wav")
    assert fs == 8000
    s, _ = read_wav(scene_dir / "s.wav")
    assert si_sdr(out, s) == pytest.approx(m["enhanced"]["si_sdr_db"], abs=1e-5)


def test_dereverb_two_passes_equals_manual_feedback(scene_dir, tmp_path):
    one = cmd_dereverb({
        "mixture": str(scene_dir / "y.wav"), "reference": str(scene_dir / "s.wav"),
        "algorithm": "fcp", "estimate_mode": "degraded",
        "estimate_error_snr_db": 10.0, "seed": 0,
        "output": str(tmp_path / "one.wav"),
    })
    # feed pass-1 output back as an external estimate
    chained = cmd_dereverb({
        "mixture": str(scene_dir / "y.wav"), "reference": str(scene_dir / "s.wav"),
        "algorithm": "fcp", "estimate_mode": "external",
        "estimate": str(tmp_path / "one.wav"),
        "output": str(tmp_path / "chained.wav"),
    })
    two = cmd_dereverb({
        "mixture": str(scene_dir / "y.wav"), "reference": str(scene_dir / "s.wav"),
        "algorithm": "fcp", "estimate_mode": "degraded",
        "estimate_error_snr_db": 10.0, "seed": 0, "passes": 2,
        "output": str(tmp_path / "two.wav"),
    })
    a, _ = read_wav(tmp_path / "two.wav")
    b, _ = read_wav(tmp_path / "chained.wav")
    # float32 re-quantization of the intermediate estimate is the only difference
    assert np.max(np.abs(a - b)) < 1e-4


def test_dereverb_rejects_wpe_zero_delay(scene_dir, capsys):
    rc = main(["dereverb", "--mixture", str(scene_dir / "y.wav"),
               "--reference", str(scene_dir / "s.wav"),
               "--algorithm", "wpe_vanilla", "--delay", "0"])
    assert rc == EXIT_CONFIG
    assert "delay" in capsys.readouterr().err


def test_dereverb_missing_input_is_io_error(capsys):
    rc = main(["dereverb", "--mixture", "does-not-exist.wav",
               "--algorithm", "wpe_vanilla"])
    assert rc == EXIT_IO


def test_dereverb_multi_output_files(scene_dir, tmp_path):
    two = tmp_path / "duo"
    cmd_simulate(simulate_args(two, n_sources=2, snr_db=None, duration_s=2.0))
    report = cmd_dereverb({
        "mixture": str(two / "y.wav"),
        "reference": [str(two / "s0.wav"), str(two / "s1.wav")],
        "algorithm": "fcp_per_source", "estimate_mode": "oracle",
        "output": str(tmp_path / "out.wav"),
    })
    assert len(report["outputs"]) == 2
    assert len(report["metrics"]) == 2


# ---------------------------------------------------------------------------
# evaluate

def test_evaluate_roundtrip(scene_dir):
    report = cmd_evaluate({
        "estimate": str(scene_dir / "y.wav"),
        "reference": str(scene_dir / "s.wav"),
    })
    assert {"si_sdr_db", "sdr_512_db", "gcc_phat_delay"} <= set(report)
    y, _ = read_wav(scene_dir / "y.wav")
    s, _ = read_wav(scene_dir / "s.wav")
    assert report["si_sdr_db"] == pytest.approx(si_sdr(y, s), abs=1e-9)


def test_cli_main_evaluate_exit_ok(scene_dir, capsys):
    rc = main(["evaluate", "--estimate", str(scene_dir / "y.wav"),
               "--reference", str(scene_dir / "s.wav")])
    assert rc == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert "si_sdr_db" in out


# ---------------------------------------------------------------------------
# experiment

def small_sweep(**overrides):
    sweep = {
        "seeds": [0, 0],  # identical on purpose
        "t60": [0.3],
        "snr_db": [None],
        "estimate_error_snr_db": [None],
        "algorithms": ["fcp"],
        "duration_s": 1.0,
        "sample_rate": 8000,
    }
    sweep.update(overrides)
    return sweep


def test_empty_sweep_valid_schema():
    result = run_experiment(small_sweep(seeds=[]))
    assert result["rows"] == [] and result["aggregates"] == {}
    assert result["schema_version"] == 1


def test_identical_seeds_identical_rows():
    result = run_experiment(small_sweep())
    rows = result["rows"]
    assert len(rows) == 2
    assert rows[0] == rows[1]


def test_partial_failure_recorded_and_run_continues():
    sweep = small_sweep(seeds=[0],
                        algorithms=[{"name": "wpe_supplied", "delay": 0}, "fcp"])
    result = run_experiment(sweep)
    errors = [r for r in result["rows"] if r["error"]]
    good = [r for r in result["rows"] if not r["error"]]
    assert len(errors) == 1 and "delay" in errors[0]["error"]
    assert len(good) == 1


def test_experiment_csv_and_json(tmp_path, capsys):
    sweep_path = tmp_path / "sweep.json"
    sweep_path.write_text(json.dumps(small_sweep(seeds=[0])))
    rc = main(["experiment", "--config", str(sweep_path),
               "--output", str(tmp_path / "result.json"),
               "--csv", str(tmp_path / "result.csv")])
    assert rc == EXIT_OK
    result = json.loads((tmp_path / "result.json").read_text())
    assert len(result["rows"]) == 1
    lines = (tmp_path / "result.csv").read_text().splitlines()
    assert lines[0].startswith("seed,") and len(lines) == 2


def test_early_only_ordering_mini_sweep():
    """Early-reflections-only scenes: FCP at zero delay beats the delayed
    predictor for every delay, matching the large-scale ordering."""
    algorithms = [{"name": "fcp"}] + [
        {"name": "wpe_supplied", "taps": 40 - d, "delay": d, "eps": 0.001}
        for d in (1, 2, 3, 4)
    ]
    sweep = small_sweep(seeds=[1, 2, 3], early_only=True, t60=[0.4],
                        duration_s=1.5, algorithms=algorithms)
    result = run_experiment(sweep)
    means = {}
    for key, agg in result["aggregates"].items():
        parsed = json.loads(key)
        label = (parsed["algorithm"], parsed["settings"].get("delay"))
        means[label] = agg["mean_si_sdr_db"]
    fcp_mean = means[("fcp", 0)]
    for d in (1, 2, 3, 4):
        assert fcp_mean > means[("wpe_supplied", d)]


def test_main_bad_config_file_exit(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    rc = main(["experiment", "--config", str(bad)])
    assert rc == EXIT_CONFIG
