import numpy as np
import pytest

from dereverb import RirSpec, StftConfig, gen_rir, render_scene, synth_speech


@pytest.fixture(scope="session")
def cfg8k():
    return StftConfig.for_rate(8000)


@pytest.fixture(scope="session")
def cfg16k():
    return StftConfig.for_rate(16000)


@pytest.fixture(scope="session")
def reverb_scene():
    """2 s single-source reverberant scene at 8 kHz, no noise."""
    fs = 8000
    dry = synth_speech(2 * fs, fs, seed=11)
    rir = gen_rir(RirSpec(fs, t60=0.5, direct_delay=24, seed=12))
    return render_scene([dry], [rir], normalize=True)


@pytest.fixture(scope="session")
def noisy_scene():
    """2 s single-source scene with 20 dB noise at 8 kHz."""
    fs = 8000
    rng = np.random.default_rng(99)
    dry = synth_speech(2 * fs, fs, seed=21)
    rir = gen_rir(RirSpec(fs, t60=0.4, direct_delay=24, seed=22))
    return render_scene([dry], [rir], noise=rng.standard_normal(2 * fs),
                        snr_db=20.0, normalize=True)


@pytest.fixture(scope="session")
def two_speaker_scene():
    """2 s two-source reverberant scene at 8 kHz."""
    fs = 8000
    dry = [synth_speech(2 * fs, fs, seed=31), synth_speech(2 * fs, fs, seed=32)]
    rirs = [gen_rir(RirSpec(fs, t60=0.4, direct_delay=24, seed=33)),
            gen_rir(RirSpec(fs, t60=0.3, direct_delay=40, seed=34))]
    return render_scene(dry, rirs, normalize=True)
