"""Domain types for the uplink CSI sensing pipeline.

Conventions used throughout the package:

* CSI tensors are indexed ``[antenna m, subcarrier k, frame i]``.
* Subcarrier ``k`` sits at absolute frequency ``f_c + k * delta_f`` (0-based).
* Antennas of one array form a uniform linear array; element ``m`` adds an
  extra propagation delay of ``m * spacing * sin(aoa) / c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s

# Breathing band limits: 5 and 35 breaths per minute.
BREATH_LOW_HZ = 0.083
BREATH_HIGH_HZ = 0.583


@dataclass(frozen=True)
class SystemConfig:
    """OFDM and array parameters of one uplink measurement."""

    carrier_freq_hz: float = 3.51e9
    num_subcarriers: int = 100
    subcarrier_spacing_hz: float = 180e3
    num_antennas: int = 64
    frame_rate_hz: float = 200.0
    num_frames: int = 12000
    # Element spacing of each uniform linear array; None means half the
    # carrier wavelength.
    antenna_spacing_m: float | None = None

    def __post_init__(self):
        if self.num_subcarriers < 1:
            raise ValueError("num_subcarriers must be >= 1")
        if self.num_antennas < 1:
            raise ValueError("num_antennas must be >= 1")
        if self.num_frames < 2:
            raise ValueError("num_frames must be >= 2")
        for name in ("carrier_freq_hz", "subcarrier_spacing_hz", "frame_rate_hz"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0")
        if self.frame_rate_hz <= 2.0 * BREATH_HIGH_HZ:
            raise ValueError(
                "frame_rate_hz must exceed twice the upper breathing band edge "
                f"({2.0 * BREATH_HIGH_HZ:.3f} Hz)"
            )
        if self.antenna_spacing_m is not None and not (
            math.isfinite(self.antenna_spacing_m) and self.antenna_spacing_m > 0
        ):
            raise ValueError("antenna_spacing_m must be finite and > 0")

    @property
    def bandwidth_hz(self) -> float:
        return self.num_subcarriers * self.subcarrier_spacing_hz

    @property
    def frame_period_s(self) -> float:
        return 1.0 / self.frame_rate_hz

    @property
    def duration_s(self) -> float:
        return self.num_frames / self.frame_rate_hz

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_freq_hz

    @property
    def element_spacing_m(self) -> float:
        if self.antenna_spacing_m is not None:
            return self.antenna_spacing_m
        return self.wavelength_m / 2.0


@dataclass(frozen=True)
class DerivedConstants:
    range_resolution_m: float
    max_unambiguous_range_m: float


def derived_constants(config: SystemConfig) -> DerivedConstants:
    """Range resolution c/B and maximum unambiguous range c/delta_f."""
    return DerivedConstants(
        range_resolution_m=SPEED_OF_LIGHT / config.bandwidth_hz,
        max_unambiguous_range_m=SPEED_OF_LIGHT / config.subcarrier_spacing_hz,
    )


@dataclass(frozen=True)
class PathSpec:
    """One propagation path between the UE and an antenna array.

    ``base_length_m`` is the static path length. When ``breathing_modulated``
    is set, chest displacement b[i] stretches the path by
    ``b[i] * cos(bistatic_angle / 2)``.
    """

    amplitude: complex
    base_length_m: float
    aoa_rad: float = 0.0
    bistatic_angle_rad: float = 0.0
    breathing_modulated: bool = False

    def __post_init__(self):
        amp = complex(self.amplitude)
        if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
            raise ValueError("amplitude must be finite")
        if not (math.isfinite(self.base_length_m) and self.base_length_m > 0):
            raise ValueError("base_length_m must be finite and > 0")
        if not math.isfinite(self.aoa_rad):
            raise ValueError("aoa_rad must be finite")
        if not (math.isfinite(self.bistatic_angle_rad) and abs(self.bistatic_angle_rad) <= math.pi):
            raise ValueError("bistatic_angle_rad must lie in [-pi, pi]")


# Chest-scale displacement bound; anything larger is not breathing.
MAX_DISPLACEMENT_M = 0.1


@dataclass(frozen=True)
class BreathingWaveform:
    """Chest displacement b[i] in meters, sampled at ``rate_hz``."""

    samples: np.ndarray
    rate_hz: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("samples must be a nonempty 1-D array")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        if np.max(np.abs(samples)) >= MAX_DISPLACEMENT_M:
            raise ValueError(f"|displacement| must stay below {MAX_DISPLACEMENT_M} m")
        if not (math.isfinite(self.rate_hz) and self.rate_hz > 0):
            raise ValueError("rate_hz must be finite and > 0")

    def __len__(self) -> int:
        return int(self.samples.size)


@dataclass(frozen=True)
class NoiseSpec:
    """Complex white noise level in dB relative to mean signal power."""

    snr_db: float

    def __post_init__(self):
        if not math.isfinite(self.snr_db):
            raise ValueError("snr_db must be finite")


@dataclass(frozen=True)
class CsiTensor:
    """Complex channel estimates of shape (antennas, subcarriers, frames)."""

    config: SystemConfig
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values)
        if not np.iscomplexobj(values):
            values = values.astype(np.complex128)
        expected = (
            self.config.num_antennas,
            self.config.num_subcarriers,
            self.config.num_frames,
        )
        if values.shape != expected:
            raise ValueError(f"values shape {values.shape} does not match config {expected}")
        if not np.all(np.isfinite(values)):
            raise ValueError("CSI values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.values.shape
