#!/usr/bin/env python3
"""Walk through the T-F transform: configuration, exact reconstruction, and
the energy bookkeeping that the square-root Hann window buys us."""

import numpy as np

from dereverb import StftConfig, analyze, synthesize

for fs in (8000, 16000):
    cfg = StftConfig.for_rate(fs)
    print(f"{fs} Hz: window {cfg.window_len} samples (32 ms), hop {cfg.hop} "
          f"(8 ms), {cfg.bins} bins")

cfg = StftConfig.for_rate(16000)
rng = np.random.default_rng(0)

x = rng.standard_normal(16000)
spec = analyze(x, cfg)
print(f"\n1 s of noise -> {spec.frames} frames x {spec.bins} bins")

y = synthesize(spec, x.size)
print(f"round-trip relative error: {np.linalg.norm(x - y) / np.linalg.norm(x):.2e}")

# The squared window overlap-adds to the constant 2, which is also the
# Parseval factor between signal energy and (full-spectrum) STFT energy.
w2 = cfg.window ** 2
cola = sum(w2[j * cfg.hop:(j + 1) * cfg.hop] for j in range(4))
print(f"summed squared window over 4 shifts: "
      f"{cola.min():.12f} .. {cola.max():.12f}")

half = np.abs(spec.data) ** 2
full = 2 * half.sum() - (np.abs(spec.data[:, 0]) ** 2).sum() \
    - (np.abs(spec.data[:, -1]) ** 2).sum()
print(f"STFT energy / (fft_size * signal energy): "
      f"{full / (cfg.fft_size * np.sum(x ** 2)):.12f}")
