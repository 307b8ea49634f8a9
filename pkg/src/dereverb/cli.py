"""Command-line surface: scene simulation, dereverberation runs, metric
evaluation, and experiment sweeps.

Every command is a pure function of (config, seed, input files): fixed seeds
give byte-identical outputs. Configs and reports are JSON; signals are mono
WAV (float32 by default, 16-bit PCM on request).

Exit codes: 0 success, 2 config error, 3 I/O error, 4 numerical failure.
"""

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import convpred, metrics
from .scene import (RirSpec, degrade, gen_rir, render_scene, strip_late,
                    synth_speech)
from .stft import StftConfig, analyze, synthesize
from .wavio import read_wav, write_wav

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NUMERIC = 4

ALGORITHMS = ("wpe_vanilla", "wpe_supplied", "icp", "fcp",
              "fcp_per_source", "wpe_sf", "wpe_mf")
MULTI_OUTPUT = ("fcp_per_source", "wpe_mf")


class ConfigError(ValueError):
    """Invalid configuration or precondition; exits with code 2."""


class NumericalError(RuntimeError):
    """Processing produced non-finite values; exits with code 4."""


# ---------------------------------------------------------------------------
# config plumbing

def _algorithm_defaults(name):
    if name not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {name!r}; choose from {ALGORITHMS}")
    if name in ("wpe_vanilla", "wpe_supplied", "wpe_sf", "wpe_mf"):
        return {"taps": 37, "delay": 3, "eps": 0.001, "lambda_mode": "mix_power"}
    if name == "icp":
        return {"taps": 40, "delay": 0, "eps": 1.0, "lambda_mode": "est_power"}
    return {"taps": 40, "delay": 0, "eps": 0.001, "lambda_mode": "mix_power"}


def _pred_settings(config):
    name = config.get("algorithm", "fcp")
    settings = _algorithm_defaults(name)
    settings.update({k: config[k] for k in
                     ("taps", "delay", "eps", "lambda_mode", "diag_load", "iters")
                     if config.get(k) is not None})
    settings.setdefault("diag_load", 1e-6)
    settings.setdefault("iters", 3)
    try:
        pred = convpred.PredConfig(
            taps=int(settings["taps"]), delay=int(settings["delay"]),
            eps=float(settings["eps"]), lambda_mode=settings["lambda_mode"],
            diag_load=float(settings["diag_load"]), iters=int(settings["iters"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if name.startswith("wpe") and pred.delay < 1:
        raise ConfigError(
            "WPE requires a prediction delay >= 1: with delay 0 the identity "
            "filter solves the problem exactly and nothing is removed")
    return name, pred


def load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc


def _merge_config(args, keys):
    """defaults < --config file < explicit flags."""
    config = {}
    if getattr(args, "config", None):
        file_cfg = load_config(args.config)
        if not isinstance(file_cfg, dict):
            raise ConfigError(f"{args.config}: top-level JSON object expected")
        config.update(file_cfg)
    for key in keys:
        val = getattr(args, key, None)
        if val is not None:
            config[key] = val
    return config


def _check_finite(x, what):
    if not np.all(np.isfinite(x)):
        raise NumericalError(f"{what} contains non-finite values")
    return x


# ---------------------------------------------------------------------------
# simulate

def _build_scene(config):
    fs = int(config.get("sample_rate", 16000))
    if fs not in (8000, 16000):
        raise ConfigError("sample_rate must be 8000 or 16000")
    duration = float(config.get("duration_s", 4.0))
    if duration <= 0:
        raise ConfigError("duration_s must be positive")
    seed = int(config.get("seed", 0))
    t60 = float(config.get("t60", 0.4))
    if t60 < 0:
        raise ConfigError("t60 must be >= 0")
    n_sources = int(config.get("n_sources", 1))
    if n_sources < 1:
        raise ConfigError("n_sources must be >= 1")
    snr_db = config.get("snr_db", None)
    early_only = bool(config.get("early_only", False))

    n = int(round(duration * fs))
    rng = np.random.default_rng(seed)
    dry = [synth_speech(n, fs, seed=int(rng.integers(2 ** 31))) for _ in range(n_sources)]

    rirs = []
    for c in range(n_sources):
        delay = int(round((0.003 + 0.004 * c) * fs))  # 1 m, then further back
        rir_seed = int(rng.integers(2 ** 31))
        if t60 == 0.0:
            # anechoic limit: zero-length tail, no early taps
            spec = RirSpec(fs, t60=1e-9, direct_delay=delay, n_early_taps=0,
                           rir_len=delay + 1, seed=rir_seed)
        else:
            spec = RirSpec(fs, t60=t60, direct_delay=delay, seed=rir_seed)
        rir = gen_rir(spec)
        if early_only:
            rir = strip_late(rir)
        rirs.append(rir)

    noise = None
    if snr_db is not None and not early_only:
        noise = rng.standard_normal(n)
    elif snr_db is not None and early_only:
        snr_db = None  # early-reflections-only scenario drops the noise too
    return render_scene(dry, rirs, noise=noise,
                        snr_db=None if snr_db is None else float(snr_db),
                        normalize=bool(config.get("normalize", True)))


def cmd_simulate(config):
    """Render a scene to WAV files plus a manifest JSON."""
    out_dir = Path(config.get("out_dir", "."))
    out_dir.mkdir(parents=True, exist_ok=True)
    encoding = config.get("encoding", "float32")
    scene = _build_scene(config)
    fs = scene.sample_rate

    files = {}

    def dump(name, samples):
        path = out_dir / f"{name}.wav"
        write_wav(path, samples, fs, encoding)
        files[name] = str(path)

    dump("y", scene.y)
    dump("s", scene.s)
    dump("h", scene.h)
    dump("v", scene.v)
    if scene.n_sources > 1:
        for c in range(scene.n_sources):
            dump(f"s{c}", scene.direct[c])
            dump(f"h{c}", scene.wet[c])
    if scene.snr_db is not None:
        dump("noise", scene.noise)

    noise_energy = float(np.sum(scene.noise ** 2))
    measured_snr = None
    if scene.snr_db is not None and noise_energy > 0:
        measured_snr = 10.0 * math.log10(float(np.sum(scene.s ** 2)) / noise_energy)

    manifest = {
        "schema_version": SCHEMA_VERSION,
        "config": {k: v for k, v in config.items() if k != "out_dir"},
        "sample_rate": fs,
        "n_samples": scene.n_samples,
        "n_sources": scene.n_sources,
        "snr_db": scene.snr_db,
        "measured_snr_db": measured_snr,
        "scale": scene.scale,
        "files": files,
    }
    manifest_path = out_dir / "manifest.json"
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


# ---------------------------------------------------------------------------
# dereverb

def _load_signals(paths, expected_fs=None, expected_len=None, what="signal"):
    out = []
    fs = expected_fs
    for p in paths:
        samples, rate = read_wav(p)
        if fs is not None and rate != fs:
            raise ConfigError(f"{p}: sample rate {rate} != {fs}")
        fs = rate
        if expected_len is not None and samples.size != expected_len:
            raise ConfigError(f"{p}: {what} length {samples.size} != {expected_len}")
        out.append(samples)
    return out, fs


def _build_estimates(config, refs, cfg):
    mode = config.get("estimate_mode", "oracle")
    seed = int(config.get("seed", 0))
    if mode == "oracle":
        return [analyze(r, cfg).data for r in refs], mode
    if mode == "degraded":
        err = config.get("estimate_error_snr_db")
        if err is None:
            raise ConfigError("estimate_mode 'degraded' needs estimate_error_snr_db")
        return [analyze(degrade(r, float(err), seed + i), cfg).data
                for i, r in enumerate(refs)], mode
    if mode == "external":
        paths = config.get("estimate") or []
        if isinstance(paths, str):
            paths = [paths]
        if not paths:
            raise ConfigError("estimate_mode 'external' needs estimate path(s)")
        signals, _ = _load_signals(paths, cfg.sample_rate, None, "estimate")
        return [analyze(sig, cfg).data for sig in signals], mode
    raise ConfigError(f"unknown estimate_mode {mode!r}")


def _single_pass(name, pred, mix_tf, ests):
    if name == "wpe_vanilla":
        out, _, _ = convpred.wpe_vanilla(mix_tf, pred)
        return [out]
    if not ests:
        raise ConfigError(f"algorithm {name!r} needs a target estimate")
    if name == "wpe_supplied":
        lam = convpred.lambda_weights(ests[0], "est_power", pred.eps)
        return [convpred.wpe_supplied(mix_tf, lam, pred.taps, pred.delay,
                                      pred.diag_load)[0]]
    if name == "icp":
        return [convpred.icp(mix_tf, ests[0], pred.taps, eps=pred.eps,
                             diag_load=pred.diag_load)[0]]
    if name == "fcp":
        return [convpred.fcp(mix_tf, ests[0], pred.taps, eps=pred.eps,
                             diag_load=pred.diag_load)[0]]
    if name == "fcp_per_source":
        return convpred.fcp_per_source(mix_tf, ests, pred.taps,
                                       pred.lambda_mode, pred.eps, pred.diag_load)
    if name == "wpe_sf":
        out, _ = convpred.wpe_multi(mix_tf, ests, pred.taps, pred.delay,
                                    pred.eps, "sf", pred.diag_load)
        return [out]
    if name == "wpe_mf":
        outs, _ = convpred.wpe_multi(mix_tf, ests, pred.taps, pred.delay,
                                     pred.eps, "mf", pred.diag_load)
        return outs
    raise ConfigError(f"unknown algorithm {name!r}")


def run_algorithm(name, pred, mix_spec, ests, passes=1, n_samples=None):
    """Dispatch one algorithm, feeding each pass's output back as the next
    pass's estimate through a time-domain round trip (so multi-pass runs
    compose exactly like re-running the tool on its own output).

    Args:
        mix_spec: mixture ComplexSpectrogram.
        ests: list of T x F estimate arrays (empty for vanilla WPE).
        n_samples: mixture length, required for passes > 1.

    Returns:
        list of T x F output arrays.
    """
    if passes < 1:
        raise ConfigError("passes must be >= 1")
    if passes > 1 and name not in ("wpe_supplied", "icp", "fcp"):
        raise ConfigError(f"passes > 1 applies to single-estimate algorithms, "
                          f"not {name!r}")
    if passes > 1 and n_samples is None:
        raise ConfigError("passes > 1 needs the mixture sample count")
    cfg = mix_spec.config
    outputs = None
    for _ in range(passes):
        outputs = _single_pass(name, pred, mix_spec.data, ests)
        if passes > 1:
            ests = [analyze(synthesize(mix_spec.with_data(outputs[0]),
                                       n_samples), cfg).data]
    return outputs


def _metric_dict(est, ref, max_lag):
    return metrics.MetricsReport(
        si_sdr=metrics.si_sdr(est, ref),
        sdr_512=metrics.sdr_512(est, ref),
        gcc_phat_delay=metrics.gcc_phat_delay(est, ref, max_lag),
    ).to_dict()


def cmd_dereverb(config):
    """Run one algorithm on a mixture WAV; write enhanced WAV(s) + report."""
    mixture_path = config.get("mixture")
    if not mixture_path:
        raise ConfigError("a mixture WAV is required")
    name, pred = _pred_settings(config)
    passes = int(config.get("passes", 1))
    if passes < 1:
        raise ConfigError("passes must be >= 1")

    mixture, fs = _load_signals([mixture_path], what="mixture")
    mixture = mixture[0]
    try:
        cfg = StftConfig.for_rate(fs)
    except ValueError as exc:
        raise ConfigError(f"{mixture_path}: {exc}") from exc
    mix_tf = analyze(mixture, cfg)

    ref_paths = config.get("reference") or []
    if isinstance(ref_paths, str):
        ref_paths = [ref_paths]
    refs, _ = _load_signals(ref_paths, fs, mixture.size, "reference")

    ests = []
    est_mode = None
    if name != "wpe_vanilla":
        if config.get("estimate_mode", "oracle") != "external" and not refs:
            raise ConfigError(
                f"algorithm {name!r} needs --reference signals (or external estimates)")
        ests, est_mode = _build_estimates(config, refs, cfg)

    outputs_tf = run_algorithm(name, pred, mix_tf, ests, passes, mixture.size)
    outputs = []
    for out_tf in outputs_tf:
        _check_finite(out_tf, "enhanced spectrogram")
        outputs.append(synthesize(mix_tf.with_data(out_tf), mixture.size))

    out_path = config.get("output")
    written = []
    if out_path:
        out_path = Path(out_path)
        encoding = config.get("encoding", "float32")
        if len(outputs) == 1:
            write_wav(out_path, outputs[0], fs, encoding)
            written.append(str(out_path))
        else:
            for c, sig in enumerate(outputs):
                p = out_path.with_name(f"{out_path.stem}_{c}{out_path.suffix}")
                write_wav(p, sig, fs, encoding)
                written.append(str(p))

    max_lag = int(config.get("max_lag", 512))
    report = {
        "schema_version": SCHEMA_VERSION,
        "algorithm": name,
        "pred": {"taps": pred.taps, "delay": pred.delay, "eps": pred.eps,
                 "lambda_mode": pred.lambda_mode, "diag_load": pred.diag_load,
                 "iters": pred.iters},
        "estimate_mode": est_mode,
        "passes": passes,
        "sample_rate": fs,
        "outputs": written,
    }
    if refs:
        per_source = []
        for c, sig in enumerate(outputs):
            ref = refs[min(c, len(refs) - 1)]
            per_source.append({
                "source": c,
                "unprocessed": _metric_dict(mixture, ref, max_lag),
                "enhanced": _metric_dict(sig, ref, max_lag),
            })
        report["metrics"] = per_source
    report_path = config.get("report")
    if report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return report


# ---------------------------------------------------------------------------
# evaluate

def cmd_evaluate(config):
    est_path = config.get("estimate")
    ref_path = config.get("reference")
    if not est_path or not ref_path:
        raise ConfigError("evaluate needs an estimate WAV and a reference WAV")
    est, fs = _load_signals([est_path], what="estimate")
    ref, _ = _load_signals([ref_path], fs, est[0].size, "reference")
    report = {
        "schema_version": SCHEMA_VERSION,
        "sample_rate": fs,
        **_metric_dict(est[0], ref[0], int(config.get("max_lag", 512))),
    }
    report_path = config.get("report")
    if report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return report


# ---------------------------------------------------------------------------
# experiment

def _sweep_algorithms(sweep):
    entries = sweep.get("algorithms", ["fcp"])
    out = []
    for entry in entries:
        if isinstance(entry, str):
            entry = {"name": entry}
        name = entry.get("name")
        settings = _algorithm_defaults(name)
        settings.update({k: v for k, v in entry.items() if k != "name"})
        out.append((name, settings))
    return out


def _run_one_scene(sweep, seed, t60, snr_db, est_err, name, settings):
    fs = int(sweep.get("sample_rate", 16000))
    cfg = StftConfig.for_rate(fs)
    scene_cfg = {
        "sample_rate": fs,
        "duration_s": sweep.get("duration_s", 4.0),
        "seed": seed,
        "t60": t60,
        "snr_db": snr_db,
        "n_sources": sweep.get("n_sources", 1),
        "early_only": sweep.get("early_only", False),
    }
    scene = _build_scene(scene_cfg)
    mix_tf = analyze(scene.y, cfg)

    ests = []
    for c in range(scene.n_sources):
        if est_err is None:
            ests.append(analyze(scene.direct[c], cfg).data)
        else:
            ests.append(analyze(degrade(scene.direct[c], float(est_err),
                                        seed + 7919 * (c + 1)), cfg).data)

    pred = convpred.PredConfig(
        taps=int(settings["taps"]), delay=int(settings["delay"]),
        eps=float(settings["eps"]), lambda_mode=settings["lambda_mode"],
        diag_load=float(settings.get("diag_load", 1e-6)),
        iters=int(settings.get("iters", 3)))
    passes = int(settings.get("passes", 1))
    outputs_tf = run_algorithm(name, pred, mix_tf, ests, passes, scene.n_samples)

    max_lag = int(sweep.get("max_lag", 512))
    per_source = []
    for c, out_tf in enumerate(outputs_tf):
        _check_finite(out_tf, "enhanced spectrogram")
        out = synthesize(mix_tf.with_data(out_tf), scene.n_samples)
        ref = scene.direct[min(c, scene.n_sources - 1)]
        per_source.append({
            "source": c,
            "unprocessed": _metric_dict(scene.y, ref, max_lag),
            "enhanced": _metric_dict(out, ref, max_lag),
        })
    return {
        "seed": seed, "t60": t60, "snr_db": snr_db,
        "estimate_error_snr_db": est_err,
        "algorithm": name, "settings": settings,
        "metrics": per_source, "error": None,
    }


def run_experiment(sweep):
    """Run a sweep over seeds x t60 x snr x algorithm x estimate degradation.

    Per-scene failures are recorded in the row and the sweep continues.
    """
    seeds = sweep.get("seeds", [])
    t60s = sweep.get("t60", [0.4])
    snrs = sweep.get("snr_db", [None])
    est_errs = sweep.get("estimate_error_snr_db", [None])
    algorithms = _sweep_algorithms(sweep)

    rows = []
    for seed in seeds:
        for t60 in t60s:
            for snr_db in snrs:
                for est_err in est_errs:
                    for name, settings in algorithms:
                        try:
                            rows.append(_run_one_scene(
                                sweep, int(seed), float(t60), snr_db,
                                est_err, name, settings))
                        except Exception as exc:  # recorded, sweep continues
                            rows.append({
                                "seed": seed, "t60": t60, "snr_db": snr_db,
                                "estimate_error_snr_db": est_err,
                                "algorithm": name, "settings": settings,
                                "metrics": None, "error": str(exc),
                            })

    aggregates = {}
    groups = {}
    for row in rows:
        if row["error"] is not None:
            continue
        key = json.dumps({
            "algorithm": row["algorithm"], "settings": row["settings"],
            "t60": row["t60"], "snr_db": row["snr_db"],
            "estimate_error_snr_db": row["estimate_error_snr_db"],
        }, sort_keys=True)
        groups.setdefault(key, []).append(row)
    for key, group in sorted(groups.items()):
        si_out = [m["enhanced"]["si_sdr_db"] for r in group for m in r["metrics"]]
        si_un = [m["unprocessed"]["si_sdr_db"] for r in group for m in r["metrics"]]
        aggregates[key] = {
            "count": len(group),
            "mean_si_sdr_db": float(np.mean(si_out)),
            "mean_unprocessed_si_sdr_db": float(np.mean(si_un)),
        }

    return {
        "schema_version": SCHEMA_VERSION,
        "config": sweep,
        "rows": rows,
        "aggregates": aggregates,
    }


def _write_csv(result, path):
    fields = ["seed", "t60", "snr_db", "estimate_error_snr_db", "algorithm",
              "taps", "delay", "eps", "source", "si_sdr_unprocessed_db",
              "si_sdr_db", "sdr_512_db", "gcc_phat_delay", "error"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in result["rows"]:
            base = {
                "seed": row["seed"], "t60": row["t60"], "snr_db": row["snr_db"],
                "estimate_error_snr_db": row["estimate_error_snr_db"],
                "algorithm": row["algorithm"],
                "taps": row["settings"].get("taps"),
                "delay": row["settings"].get("delay"),
                "eps": row["settings"].get("eps"),
                "error": row["error"],
            }
            if row["metrics"] is None:
                writer.writerow(base)
                continue
            for m in row["metrics"]:
                writer.writerow({
                    **base, "source": m["source"],
                    "si_sdr_unprocessed_db": m["unprocessed"]["si_sdr_db"],
                    "si_sdr_db": m["enhanced"]["si_sdr_db"],
                    "sdr_512_db": m["enhanced"]["sdr_512_db"],
                    "gcc_phat_delay": m["enhanced"]["gcc_phat_delay"],
                })


def cmd_experiment(config):
    sweep_path = config.get("sweep")
    sweep = load_config(sweep_path) if sweep_path else {
        k: v for k, v in config.items() if k not in ("output", "csv")}
    if not isinstance(sweep, dict):
        raise ConfigError("sweep config must be a JSON object")
    result = run_experiment(sweep)
    out = config.get("output")
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(result, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if config.get("csv"):
        _write_csv(result, config["csv"])
    return result


# ---------------------------------------------------------------------------
# argument parsing

def _add_pred_flags(p):
    p.add_argument("--algorithm", choices=ALGORITHMS)
    p.add_argument("--taps", type=int)
    p.add_argument("--delay", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--lambda-mode", dest="lambda_mode",
                   choices=("est_power", "mix_power", "unit"))
    p.add_argument("--diag-load", dest="diag_load", type=float)
    p.add_argument("--iters", type=int)
    p.add_argument("--passes", type=int)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dereverb",
        description="Monaural dereverberation toolkit: simulate scenes, run "
                    "WPE/ICP/FCP, evaluate, and sweep experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="render a synthetic scene to WAV files")
    p.add_argument("--config")
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--sample-rate", dest="sample_rate", type=int)
    p.add_argument("--duration-s", dest="duration_s", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--t60", type=float)
    p.add_argument("--snr-db", dest="snr_db", type=float)
    p.add_argument("--n-sources", dest="n_sources", type=int)
    p.add_argument("--early-only", dest="early_only", action="store_const", const=True)
    p.add_argument("--encoding", choices=("float32", "pcm16"))

    p = sub.add_parser("dereverb", help="dereverberate a mixture WAV")
    p.add_argument("--config")
    p.add_argument("--mixture")
    p.add_argument("--reference", action="append")
    p.add_argument("--estimate", action="append")
    p.add_argument("--estimate-mode", dest="estimate_mode",
                   choices=("oracle", "degraded", "external"))
    p.add_argument("--estimate-error-snr-db", dest="estimate_error_snr_db", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--output")
    p.add_argument("--report")
    p.add_argument("--encoding", choices=("float32", "pcm16"))
    p.add_argument("--max-lag", dest="max_lag", type=int)
    _add_pred_flags(p)

    p = sub.add_parser("evaluate", help="compute metrics for an estimate/reference pair")
    p.add_argument("--config")
    p.add_argument("--estimate")
    p.add_argument("--reference")
    p.add_argument("--max-lag", dest="max_lag", type=int)
    p.add_argument("--report")

    p = sub.add_parser("experiment", help="run a sweep described by a JSON config")
    p.add_argument("--config", dest="sweep")
    p.add_argument("--output")
    p.add_argument("--csv")

    return parser


_COMMAND_KEYS = {
    "simulate": ("out_dir", "sample_rate", "duration_s", "seed", "t60",
                 "snr_db", "n_sources", "early_only", "encoding"),
    "dereverb": ("mixture", "reference", "estimate", "estimate_mode",
                 "estimate_error_snr_db", "seed", "output", "report",
                 "encoding", "max_lag", "algorithm", "taps", "delay", "eps",
                 "lambda_mode", "diag_load", "iters", "passes"),
    "evaluate": ("estimate", "reference", "max_lag", "report"),
    "experiment": ("sweep", "output", "csv"),
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "experiment":
            config = {k: getattr(args, k, None) for k in _COMMAND_KEYS["experiment"]}
            result = cmd_experiment(config)
        else:
            config = _merge_config(args, _COMMAND_KEYS[args.command])
            if args.command == "simulate":
                result = cmd_simulate(config)
            elif args.command == "dereverb":
                result = cmd_dereverb(config)
            else:
                result = cmd_evaluate(config)
        if not (args.command == "experiment" and config.get("output")):
            json.dump(result, sys.stdout, indent=2, sort_keys=True)
            sys.stdout.write("\n")
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
