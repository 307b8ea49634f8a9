#!/usr/bin/env python3
"""Two reverberant speakers: per-source forward prediction against the
single- and multi-filter delayed variants.

Each speaker sits in its own room response, so one shared filter has to
compromise; filtering each estimate separately does not.
"""

import numpy as np

from dereverb import (RirSpec, StftConfig, analyze, fcp_per_source, gen_rir,
                      render_scene, si_sdr, synth_speech, synthesize,
                      wpe_multi)

fs = 8000
cfg = StftConfig.for_rate(fs)
rows = {"unprocessed": [], "wpe single-filter": [], "wpe multi-filter": [],
        "fcp per-source": []}

for seed in range(5):
    dry = [synth_speech(3 * fs, fs, seed=300 + seed),
           synth_speech(3 * fs, fs, seed=400 + seed)]
    rirs = [gen_rir(RirSpec(fs, t60=0.45, direct_delay=24, seed=500 + seed)),
            gen_rir(RirSpec(fs, t60=0.30, direct_delay=40, seed=600 + seed))]
    scene = render_scene(dry, rirs, normalize=True)
    mix = analyze(scene.y, cfg)
    ests = [analyze(scene.direct[c], cfg).data for c in range(2)]

    sf_out, _ = wpe_multi(mix.data, ests, variant="sf")
    mf_outs, _ = wpe_multi(mix.data, ests, variant="mf")
    fcp_outs = fcp_per_source(mix.data, ests)

    for c in range(2):
        ref = scene.direct[c]
        rows["unprocessed"].append(si_sdr(scene.y, ref))
        rows["wpe single-filter"].append(
            si_sdr(synthesize(mix.with_data(sf_out), scene.n_samples), ref))
        rows["wpe multi-filter"].append(
            si_sdr(synthesize(mix.with_data(mf_outs[c]), scene.n_samples), ref))
        rows["fcp per-source"].append(
            si_sdr(synthesize(mix.with_data(fcp_outs[c]), scene.n_samples), ref))

print("mean SI-SDR vs each speaker's direct path (5 scenes x 2 speakers):")
for label, vals in rows.items():
    print(f"  {label:18s} {np.mean(vals):6.2f} dB")
print("\nThe shared-stack variants dereverberate 'the mixture'; the")
print("per-source forward filters dereverberate each speaker.")
