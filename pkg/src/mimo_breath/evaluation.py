"""Score breathing estimates against ground truth.

The correlation metric power-normalizes both series and takes the maximum
absolute normalized cross-correlation over lags within +/-2 s, which maps
any estimate onto [0, 1], absorbs the projection sign ambiguity, and
tolerates small trigger skew between the CSI and ground-truth recordings.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .combining import normalize_series
from .errors import DegenerateSignalError, NoBreathDetected
from .projection import BreathBand

MAX_LAG_S = 2.0
METHODS = ("SASS", "SAMS-IDFT", "SAMS-DiverSense", "MAMS-WAC")


@dataclass(frozen=True)
class GroundTruth:
    """Reference chest displacement trace."""

    samples: np.ndarray = field(repr=False)
    rate_hz: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("samples must be a nonempty 1-D array")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        if self.rate_hz <= 0:
            raise ValueError("rate_hz must be > 0")

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.rate_hz


@dataclass(frozen=True)
class ScoreRecord:
    """Evaluation result of one method on one run."""

    method: str
    correlation: float
    est_bpm: float | None
    gt_bpm: float | None
    run_id: str

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if not 0.0 <= self.correlation <= 1.0:
            raise ValueError("correlation must lie in [0, 1]")

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "correlation": self.correlation,
            "est_bpm": self.est_bpm,
            "gt_bpm": self.gt_bpm,
            "run_id": self.run_id,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScoreRecord":
        try:
            return cls(
                method=data["method"],
                correlation=float(data["correlation"]),
                est_bpm=None if data.get("est_bpm") is None else float(data["est_bpm"]),
                gt_bpm=None if data.get("gt_bpm") is None else float(data["gt_bpm"]),
                run_id=str(data.get("run_id", "")),
            )
        except KeyError as exc:
            raise ValueError(f"score record missing field {exc}") from exc


@dataclass(frozen=True)
class CdfCurve:
    """Empirical CDF as sorted (value, cumulative probability) points."""

    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.points:
            raise ValueError("CDF needs at least one point")
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        if any(b < a for a, b in zip(xs, xs[1:])) or any(b < a for a, b in zip(ys, ys[1:])):
            raise ValueError("CDF points must be nondecreasing")
        if abs(ys[-1] - 1.0) > 1e-12:
            raise ValueError("CDF must reach 1.0")


def resample(series: np.ndarray, from_rate: float, to_rate: float) -> np.ndarray:
    """Linear-interpolation resampling onto a uniform grid, keeping duration."""
    if from_rate <= 0 or to_rate <= 0:
        raise ValueError("rates must be > 0")
    series = np.asarray(series, dtype=np.float64)
    if series.size == 0:
        raise ValueError("cannot resample an empty series")
    n_out = int(round(series.size * to_rate / from_rate))
    t_out = np.arange(n_out) / to_rate
    t_in = np.arange(series.size) / from_rate
    return np.interp(t_out, t_in, series)


def correlation_score(
    est: np.ndarray,
    gt: np.ndarray,
    rate: float,
    max_lag_s: float = MAX_LAG_S,
) -> float:
    """Max |normalized cross-correlation| over lags within +/-max_lag_s.

    Both series are normalized to zero mean and unit power first; identical
    series score 1.0 and the result is clipped to [0, 1].
    """
    est = np.asarray(est, dtype=np.float64)
    gt = np.asarray(gt, dtype=np.float64)
    n = min(est.size, gt.size)
    if n == 0:
        raise ValueError("empty series")
    if max(est.size, gt.size) - n > max(1, int(0.01 * n)):
        raise ValueError(f"length mismatch beyond 1%: {est.size} vs {gt.size}")
    x = normalize_series(est[:n])
    y = normalize_series(gt[:n])

    max_lag = int(round(max_lag_s * rate))
    best = 0.0
    for lag in range(-max_lag, max_lag + 1):
        if lag >= 0:
            a, b = x[: n - lag], y[lag:]
        else:
            a, b = x[-lag:], y[: n + lag]
        if a.size < 2:
            continue
        rho = abs(float(np.dot(a, b)) / a.size)
        if rho > best:
            best = rho
    return float(min(best, 1.0))


def estimate_bpm(
    series: np.ndarray,
    rate: float,
    band: BreathBand | None = None,
) -> float:
    """Breathing rate from the in-band periodogram peak, in bpm.

    The peak is refined with a parabolic fit on the log-periodogram (a 60 s
    record has 1 bpm raw bins). Raises NoBreathDetected when the average
    in-band power does not clear twice the median periodogram bin, i.e. when
    the band holds nothing but the noise floor.
    """
    band = band or BreathBand()
    series = np.asarray(series, dtype=np.float64)
    if series.size / rate < 2.0 / band.low_hz:
        raise ValueError("series must span at least two periods of the band's low edge")
    if np.ptp(series) == 0.0:
        raise DegenerateSignalError("bpm undefined for a constant series")

    spec = np.abs(np.fft.rfft(series - np.mean(series))) ** 2
    freqs = np.fft.rfftfreq(series.size, d=1.0 / rate)
    in_band = np.flatnonzero((freqs >= band.low_hz) & (freqs <= band.high_hz))
    if in_band.size == 0:
        raise NoBreathDetected("no periodogram bin falls inside the breathing band")

    noise_floor = float(np.median(spec[1:]))
    if float(np.mean(spec[in_band])) < 2.0 * noise_floor:
        raise NoBreathDetected("in-band power does not rise above the noise floor")

    peak = int(in_band[np.argmax(spec[in_band])])
    return 60.0 * (peak + _parabolic_offset(spec, peak)) * rate / series.size


def _parabolic_offset(spec: np.ndarray, peak: int) -> float:
    """Sub-bin peak offset from a parabola through the log-periodogram."""
    if peak <= 0 or peak >= spec.size - 1:
        return 0.0
    left, mid, right = spec[peak - 1], spec[peak], spec[peak + 1]
    if left <= 0.0 or mid <= 0.0 or right <= 0.0:
        return 0.0
    a, b, g = np.log(left), np.log(mid), np.log(right)
    denom = a - 2.0 * b + g
    if denom >= 0.0:
        return 0.0
    offset = 0.5 * (a - g) / denom
    return float(np.clip(offset, -0.5, 0.5))


def empirical_cdf(scores) -> CdfCurve:
    """Standard empirical CDF: sorted values, cumulative rank / N."""
    scores = list(scores)
    if not scores:
        raise ValueError("cannot build a CDF from an empty score list")
    ordered = np.sort(np.asarray(scores, dtype=np.float64))
    n = ordered.size
    points = tuple((float(x), (i + 1) / n) for i, x in enumerate(ordered))
    return CdfCurve(points=points)
