"""Fuse per-antenna breathing estimates with BNR-derived weights.

Antennas are combined maximum-ratio style with w_m = sqrt(BNR_m); antennas
whose BNR does not exceed 1 are weighted 0. Estimates are normalized to zero
mean and unit power before the weighted sum, and each one is sign-aligned to
the best-BNR antenna (a projection at alpha and alpha + pi is the same
candidate with opposite sign, so unaligned summation could cancel).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateSignalError
from .projection import BreathEstimate

BNR_GATE = 1.0


@dataclass(frozen=True)
class AntennaStack:
    """Per-antenna breathing estimates sharing one frame grid."""

    estimates: tuple[BreathEstimate, ...]
    frame_rate_hz: float

    def __init__(self, estimates: Sequence[BreathEstimate], frame_rate_hz: float):
        estimates = tuple(estimates)
        if not estimates:
            raise ValueError("at least one estimate is required")
        length = len(estimates[0])
        if any(len(e) != length for e in estimates):
            raise ValueError("all estimates must have the same frame count")
        indices = [e.antenna_index for e in estimates]
        if len(set(indices)) != len(indices):
            raise ValueError("antenna indices must be unique")
        if frame_rate_hz <= 0:
            raise ValueError("frame_rate_hz must be > 0")
        object.__setattr__(self, "estimates", estimates)
        object.__setattr__(self, "frame_rate_hz", float(frame_rate_hz))

    def __len__(self) -> int:
        return len(self.estimates)


@dataclass(frozen=True)
class CombinedEstimate:
    """Weighted-sum breathing estimate with the per-antenna gate decisions."""

    samples: np.ndarray = field(repr=False)
    weights: np.ndarray
    included_mask: np.ndarray
    fallback: bool = False

    def __post_init__(self):
        for name in ("samples", "weights"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        mask = np.asarray(self.included_mask, dtype=bool)
        mask.setflags(write=False)
        object.__setattr__(self, "included_mask", mask)
        if np.any(self.weights < 0.0):
            raise ValueError("weights must be >= 0")
        if np.any((self.weights > 0.0) != mask):
            raise ValueError("weights must be 0 exactly where the mask is false")
        if not np.any(mask):
            raise ValueError("at least one antenna must be included")


def normalize_estimate(est: BreathEstimate) -> BreathEstimate:
    """Return the estimate scaled to zero mean and unit power."""
    return BreathEstimate(
        samples=normalize_series(est.samples),
        antenna_index=est.antenna_index,
        projection_angle_rad=est.projection_angle_rad,
        bnr=est.bnr,
    )


def normalize_series(samples: np.ndarray) -> np.ndarray:
    """Zero-mean, unit-power (mean of squares = 1) version of a series."""
    samples = np.asarray(samples, dtype=np.float64)
    centered = samples - np.mean(samples)
    power = float(np.mean(centered**2))
    if power == 0.0:
        raise DegenerateSignalError("cannot normalize a constant series")
    return centered / np.sqrt(power)


def wac(stack: AntennaStack) -> CombinedEstimate:
    """Weighted antenna combining with the BNR > 1 gate.

    Weights and mask follow the stack's estimate order. When no antenna
    passes the gate, the single best-BNR antenna is returned with
    ``fallback=True`` so the pipeline always emits an estimate.
    """
    estimates = stack.estimates
    gammas = np.array([e.bnr for e in estimates])
    normalized = [normalize_series(e.samples) for e in estimates]
    # Tie-breaking and summation run in antenna-index order so the combined
    # samples are invariant to how the stack happens to be ordered.
    by_antenna = sorted(range(len(estimates)), key=lambda j: estimates[j].antenna_index)
    by_gamma = sorted(by_antenna, key=lambda j: -gammas[j])

    included = gammas > BNR_GATE
    fallback = not bool(np.any(included))
    if fallback:
        included = np.zeros_like(included)
        included[by_gamma[0]] = True

    weights = np.where(included, np.sqrt(gammas), 0.0)
    # Reference antenna: highest BNR among the included, ties to lowest index.
    ref = next(j for j in by_gamma if included[j])

    combined = np.zeros(len(normalized[0]))
    for idx in by_antenna:
        if not included[idx]:
            continue
        series = normalized[idx]
        if float(np.mean(series * normalized[ref])) < 0.0:
            series = -series
        combined += weights[idx] * series

    return CombinedEstimate(
        samples=normalize_series(combined),
        weights=weights,
        included_mask=included,
        fallback=fallback,
    )
