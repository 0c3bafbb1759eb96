import numpy as np
import pytest

from sepmatch import AudioSignal, SeparationInstance


def sine(freq, n=4000, rate=8000, amp=0.8, phase=0.0):
    t = np.arange(n) / rate
    return AudioSignal(amp * np.sin(2 * np.pi * freq * t + phase), rate)


def toy_instance(c=3, n=4000, rate=8000, noise=0.0, shuffle=None, seed=0):
    """Instance of c decorrelated sines; estimates are (optionally shuffled,
    optionally noisy) copies of the targets.

    estimates[j] corresponds to targets[shuffle[j]], so the planted optimal
    permutation is the inverse of `shuffle`.
    """
    rng = np.random.default_rng(seed)
    freqs = np.linspace(300.0, 1900.0, c)
    targets = [sine(f, n=n, rate=rate, phase=rng.uniform(0, 2 * np.pi)) for f in freqs]
    mixture = AudioSignal(sum(t.samples for t in targets) / c, rate)
    arrays = [t.samples.copy() for t in targets]
    if noise:
        arrays = [a + noise * rng.standard_normal(n) for a in arrays]
    if shuffle is not None:
        arrays = [arrays[k] for k in shuffle]
    estimates = [AudioSignal(a, rate) for a in arrays]
    return SeparationInstance(tuple(targets), tuple(estimates), mixture)


@pytest.fixture
def golden_matrix():
    # Enumerated optimum: permutation (1, 0, 2) with cost 1 + 2 + 2 = 5.
    return np.array([[4.0, 1.0, 3.0], [2.0, 0.0, 5.0], [3.0, 2.0, 2.0]])
