#!/usr/bin/env python3
"""Why zero-delay forward prediction wins on early reflections.

Scenes here keep only the direct path and the first 50 ms of reflections
(late tail and noise removed). A delayed predictor cannot reach energy
inside its delay horizon; FCP has no delay and removes it.
"""

import numpy as np

from dereverb import (RirSpec, StftConfig, analyze, fcp, gcc_phat_delay,
                      gen_rir, lambda_weights, render_scene, si_sdr,
                      strip_late, synth_speech, synthesize, wpe_supplied)

fs = 8000
cfg = StftConfig.for_rate(fs)
delays = (1, 2, 3, 4)
scores = {"fcp": []}
scores.update({f"wpe d={d}": [] for d in delays})

for seed in range(10):
    dry = synth_speech(int(2.5 * fs), fs, seed=100 + seed)
    rir = strip_late(gen_rir(RirSpec(fs, t60=0.4, direct_delay=24,
                                     seed=200 + seed)))
    scene = render_scene([dry], [rir], normalize=True)
    mix = analyze(scene.y, cfg)
    est = analyze(scene.s, cfg)

    shat, _, _ = fcp(mix.data, est.data, taps=40)
    out = synthesize(mix.with_data(shat), scene.n_samples)
    scores["fcp"].append(si_sdr(out, scene.s))
    assert gcc_phat_delay(out, scene.s, 400) == 0  # no hidden time shift

    lam = lambda_weights(est.data, "est_power", 0.001)
    for d in delays:
        out_tf, _ = wpe_supplied(mix.data, lam, taps=40 - d, delay=d)
        out_w = synthesize(mix.with_data(out_tf), scene.n_samples)
        scores[f"wpe d={d}"].append(si_sdr(out_w, scene.s))
        assert gcc_phat_delay(out_w, scene.s, 400) == 0

print("mean SI-SDR over 10 early-reflections-only scenes:")
for label, vals in scores.items():
    print(f"  {label:10s} {np.mean(vals):6.2f} dB")
print("\n(GCC-PHAT delay of every output against the direct path was 0, so")
print(" the gap is not a time-alignment artifact.)")
