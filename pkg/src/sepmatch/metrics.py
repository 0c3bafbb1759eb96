"""Scale-invariant separation metrics and permutation-matched losses.

The pairwise matching loss of a C-source instance is built in two steps:
`pairwise_cost_matrix` scores every (target, estimate) pair with negative
SI-SNR, then either the polynomial solver (`hungarian_loss`) or exhaustive
enumeration (`pit_loss`) picks the permutation minimizing the mean loss.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .assignment import (
    BRUTEFORCE_GUARD,
    CostMatrix,
    solve_bruteforce,
    solve_hungarian,
)
from .errors import EmptyInputError, InvalidInputError

#: SI-SNR outputs are clamped to +/- this many dB so cost matrices stay finite.
SI_SNR_CLAMP_DB = 60.0

#: Residual-power floor guarding the zero-error (perfect match) case.
SI_SNR_EPS = 1e-8


@dataclass(frozen=True, eq=False)
class AudioSignal:
    """Mono sample buffer plus its sample rate in Hz."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise InvalidInputError(f"samples must be 1-D, got shape {samples.shape}")
        if samples.size < 1:
            raise EmptyInputError("signal has no samples")
        if not np.isfinite(samples).all():
            raise InvalidInputError("signal contains non-finite samples")
        rate = int(self.sample_rate)
        if rate < 1:
            raise InvalidInputError(f"sample_rate must be positive, got {self.sample_rate}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", rate)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate


@dataclass(frozen=True, eq=False)
class SeparationInstance:
    """Aligned target and estimate signals plus their common mixture."""

    targets: tuple[AudioSignal, ...]
    estimates: tuple[AudioSignal, ...]
    mixture: AudioSignal

    def __post_init__(self) -> None:
        targets = tuple(self.targets)
        estimates = tuple(self.estimates)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "estimates", estimates)
        if len(targets) != len(estimates):
            raise InvalidInputError(
                f"{len(targets)} targets but {len(estimates)} estimates"
            )
        if len(targets) < 2:
            raise InvalidInputError("an instance needs at least 2 sources")
        everything = targets + estimates + (self.mixture,)
        rates = {s.sample_rate for s in everything}
        if len(rates) > 1:
            raise InvalidInputError(f"signals disagree on sample rate: {sorted(rates)}")
        lengths = {len(s) for s in everything}
        if len(lengths) > 1:
            raise InvalidInputError(f"signals disagree on length: {sorted(lengths)}")

    @property
    def size(self) -> int:
        return len(self.targets)


@dataclass(frozen=True, eq=False)
class MatchedLoss:
    """Best permutation with its per-pair and mean losses (dB-loss units)."""

    permutation: np.ndarray
    mean_loss: float
    per_pair: np.ndarray


def _signal_samples(signal) -> np.ndarray:
    if isinstance(signal, AudioSignal):
        return signal.samples
    samples = np.asarray(signal, dtype=np.float64)
    if samples.ndim != 1 or samples.size == 0:
        raise InvalidInputError("expected a non-empty 1-D sample buffer")
    if not np.isfinite(samples).all():
        raise InvalidInputError("samples contain non-finite values")
    return samples


def si_snr(target, estimate) -> float:
    """Scale-invariant signal-to-noise ratio in dB, clamped to [-60, +60].

    Both signals are mean-subtracted; the estimate is then normalized to
    unit energy (the metric is gain-invariant, and a fixed estimate scale
    keeps the residual floor from leaking scale back into the score). The
    estimate splits into its projection onto the target plus a residual,
    and the score is 10*log10(projection power / (residual power + 1e-8)).

    Accepts AudioSignal or raw 1-D arrays. Raises on length mismatch and on
    a target with zero energy after mean removal; a silent estimate scores
    the clamp floor.
    """
    t = _signal_samples(target)
    e = _signal_samples(estimate)
    if t.size != e.size:
        raise InvalidInputError(f"length mismatch: target {t.size} vs estimate {e.size}")
    t_peak = float(np.abs(t).max())
    e_peak = float(np.abs(e).max())
    t = t - t.mean()
    e = e - e.mean()
    with np.errstate(over="ignore"):  # overflow is detected and rejected below
        target_power = float(t @ t)
        estimate_power = float(e @ e)
    if not (math.isfinite(target_power) and math.isfinite(estimate_power)):
        raise InvalidInputError("signal energy overflows float64; rescale the inputs")
    # A constant signal is zero-energy once mean-removed, but float rounding
    # leaves ~1e-16-per-sample residue; threshold relative to the raw peak.
    if math.sqrt(target_power) <= 1e-12 * t_peak * math.sqrt(t.size):
        raise InvalidInputError("target has zero energy after mean removal; cannot project")
    if math.sqrt(estimate_power) <= 1e-12 * e_peak * math.sqrt(e.size):
        return -SI_SNR_CLAMP_DB
    e = e / math.sqrt(estimate_power)
    projection = (float(e @ t) / target_power) * t
    residual = e - projection
    p = float(projection @ projection)
    if p == 0.0:
        return -SI_SNR_CLAMP_DB
    value = 10.0 * math.log10(p / (float(residual @ residual) + SI_SNR_EPS))
    return float(min(max(value, -SI_SNR_CLAMP_DB), SI_SNR_CLAMP_DB))


def _validated_permutation(permutation, size: int) -> np.ndarray:
    perm = np.asarray(permutation, dtype=np.intp)
    if perm.shape != (size,) or not np.array_equal(np.sort(perm), np.arange(size)):
        raise InvalidInputError(f"not a permutation of 0..{size - 1}: {permutation!r}")
    return perm


def si_sdr_improvement(instance: SeparationInstance, permutation) -> np.ndarray:
    """Per-source gain of the matched estimates over using the raw mixture.

    Element i is si_snr(targets[i], estimates[perm[i]]) minus
    si_snr(targets[i], mixture).
    """
    perm = _validated_permutation(permutation, instance.size)
    out = np.empty(instance.size)
    for i, target in enumerate(instance.targets):
        matched = si_snr(target, instance.estimates[perm[i]])
        baseline = si_snr(target, instance.mixture)
        out[i] = matched - baseline
    return out


def pairwise_cost_matrix(instance: SeparationInstance) -> CostMatrix:
    """C-by-C matrix with entry (i, j) = -si_snr(targets[i], estimates[j])."""
    size = instance.size
    entries = np.empty((size, size))
    for i, target in enumerate(instance.targets):
        for j, estimate in enumerate(instance.estimates):
            try:
                entries[i, j] = -si_snr(target, estimate)
            except InvalidInputError as exc:
                raise InvalidInputError(f"pair (target {i}, estimate {j}): {exc}") from exc
    return CostMatrix(entries)


def _matched_loss(matrix: CostMatrix, permutation: np.ndarray) -> MatchedLoss:
    per_pair = matrix.entries[np.arange(matrix.size), permutation]
    return MatchedLoss(permutation, float(per_pair.mean()), per_pair)


def hungarian_loss(instance: SeparationInstance) -> MatchedLoss:
    """Minimum mean pairwise loss via the polynomial assignment solver."""
    matrix = pairwise_cost_matrix(instance)
    result = solve_hungarian(matrix)
    return _matched_loss(matrix, result.permutation)


def pit_loss(instance: SeparationInstance, guard: int = BRUTEFORCE_GUARD) -> MatchedLoss:
    """Same contract as hungarian_loss but via exhaustive enumeration.

    Kept as the oracle: for any instance within the guard the two must
    agree on mean_loss.
    """
    matrix = pairwise_cost_matrix(instance)
    result = solve_bruteforce(matrix, guard=guard)
    return _matched_loss(matrix, result.permutation)
