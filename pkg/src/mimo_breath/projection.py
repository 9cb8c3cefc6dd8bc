"""Project a complex range signal onto the axis that maximizes the BNR.

Breathing traces a small arc in the complex plane, so a single projection
angle captures most of the motion. Candidates out[i] = I[i] cos(a) +
Q[i] sin(a) are scored by the breathing-to-noise ratio

    BNR = P_breath / (P_tot - P_breath),

where P_breath sums the one-sided periodogram bins whose center frequency
falls inside the breathing band and P_tot sums all bins except DC. The
periodogram is a single mean-removed rectangular-window estimate, so the
ratio is deterministic and scale invariant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSignalError
from .model import BREATH_HIGH_HZ, BREATH_LOW_HZ

ALPHA_GRID_STEPS = 180  # 1-degree resolution over [0, pi)
BNR_CAP = 1e6  # surrogate for division by vanishing out-of-band power


@dataclass(frozen=True)
class BreathBand:
    """Frequency band of plausible breathing rates (5 to 35 bpm)."""

    low_hz: float = BREATH_LOW_HZ
    high_hz: float = BREATH_HIGH_HZ

    def __post_init__(self):
        if not 0.0 < self.low_hz < self.high_hz:
            raise ValueError("band must satisfy 0 < low_hz < high_hz")


@dataclass(frozen=True)
class BreathEstimate:
    """Real breathing estimate of one antenna with its projection metadata."""

    samples: np.ndarray = field(repr=False)
    antenna_index: int
    projection_angle_rad: float
    bnr: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        if not np.all(np.isfinite(samples)):
            raise ValueError("estimate samples must be finite")
        if not 0.0 <= self.projection_angle_rad < np.pi:
            raise ValueError("projection angle must lie in [0, pi)")
        if self.bnr < 0.0:
            raise ValueError("bnr must be >= 0")

    def __len__(self) -> int:
        return int(self.samples.size)


def project(signal, alpha: float) -> np.ndarray:
    """Linear combination of the real and imaginary parts at angle alpha."""
    samples = _samples_of(signal)
    return samples.real * np.cos(alpha) + samples.imag * np.sin(alpha)


def bnr(series: np.ndarray, frame_rate: float, band: BreathBand | None = None) -> float:
    """Breathing-to-noise ratio of a real series.

    Raises DegenerateSignalError for a constant series (dead antenna), and
    caps the ratio at 1e6 when out-of-band power vanishes.
    """
    band = band or BreathBand()
    series = np.asarray(series, dtype=np.float64)
    if series.ndim != 1 or series.size < 2:
        raise ValueError("series must be 1-D with at least 2 samples")
    if np.ptp(series) == 0.0:
        raise DegenerateSignalError("BNR undefined for a constant series")
    spec = np.abs(np.fft.rfft(series - np.mean(series))) ** 2
    in_band, non_dc = _band_masks(series.size, frame_rate, band)
    return _bnr_from_power(spec, in_band, non_dc)


def best_projection(
    signal,
    frame_rate: float,
    band: BreathBand | None = None,
    antenna_index: int | None = None,
) -> BreathEstimate:
    """Search a 180-step angle grid over [0, pi) for the highest BNR.

    Angles alpha and alpha + pi give negated series with identical BNR, so
    the half circle covers all candidates; ties keep the lowest grid index.
    The periodogram of every candidate is built from two FFTs: projection is
    linear, hence rfft(project(s, a)) = cos(a) rfft(I) + sin(a) rfft(Q).
    """
    band = band or BreathBand()
    samples = _samples_of(signal)
    if antenna_index is None:
        antenna_index = getattr(signal, "antenna_index", 0)

    i_part = samples.real - np.mean(samples.real)
    q_part = samples.imag - np.mean(samples.imag)
    fi = np.fft.rfft(i_part)
    fq = np.fft.rfft(q_part)
    in_band, non_dc = _band_masks(samples.size, frame_rate, band)

    alphas = alpha_grid()
    best_alpha = None
    best_gamma = -np.inf
    for idx, alpha in enumerate(alphas):
        spec = np.abs(np.cos(alpha) * fi + np.sin(alpha) * fq) ** 2
        total = float(np.sum(spec[non_dc]))
        if total <= 0.0:
            continue  # degenerate candidate: projection is constant
        gamma = _bnr_from_power(spec, in_band, non_dc)
        if gamma > best_gamma:
            best_gamma = gamma
            best_alpha = float(alpha)
    if best_alpha is None:
        raise DegenerateSignalError("all projection candidates are constant")

    return BreathEstimate(
        samples=project(samples, best_alpha),
        antenna_index=int(antenna_index),
        projection_angle_rad=best_alpha,
        bnr=best_gamma,
    )


def alpha_grid() -> np.ndarray:
    """Uniform projection-angle grid over [0, pi)."""
    return np.arange(ALPHA_GRID_STEPS) * (np.pi / ALPHA_GRID_STEPS)


def _band_masks(n: int, frame_rate: float, band: BreathBand):
    freqs = np.fft.rfftfreq(n, d=1.0 / frame_rate)
    in_band = (freqs >= band.low_hz) & (freqs <= band.high_hz)
    non_dc = freqs > 0.0
    return in_band, non_dc


def _bnr_from_power(spec: np.ndarray, in_band: np.ndarray, non_dc: np.ndarray) -> float:
    p_breath = float(np.sum(spec[in_band]))
    p_total = float(np.sum(spec[non_dc]))
    p_out = p_total - p_breath
    if p_out <= 0.0:
        return BNR_CAP
    return min(p_breath / p_out, BNR_CAP)


def _samples_of(signal) -> np.ndarray:
    samples = getattr(signal, "samples", signal)
    return np.asarray(samples, dtype=np.complex128)
