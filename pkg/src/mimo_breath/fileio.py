"""File formats for CSI tensors, ground truth, and estimates.

CSI tensor: raw little-endian binary of 2*M*K*I float32 values, interleaved
(re, im), with frame index fastest, then subcarrier, then antenna; a sidecar
JSON header ``<binary>.json`` carries
{"M", "K", "I", "carrier_freq_hz", "subcarrier_spacing_hz", "frame_rate_hz"}.
This is exactly a C-ordered complex64 array of shape (M, K, I), so round
trips are bit-exact.

Ground truth and estimates are two-column CSVs with a required header row:
``time_s,displacement_m`` and ``time_s,value``.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import CsiFormatError
from .evaluation import GroundTruth
from .model import BreathingWaveform, CsiTensor, SystemConfig

CSI_DTYPE = np.dtype("<c8")  # little-endian complex64: interleaved float32 pairs

GT_HEADER = ("time_s", "displacement_m")
EST_HEADER = ("time_s", "value")


def sidecar_path(binary_path) -> Path:
    return Path(str(binary_path) + ".json")


def csi_header(config: SystemConfig) -> dict:
    return {
        "M": config.num_antennas,
        "K": config.num_subcarriers,
        "I": config.num_frames,
        "carrier_freq_hz": config.carrier_freq_hz,
        "subcarrier_spacing_hz": config.subcarrier_spacing_hz,
        "frame_rate_hz": config.frame_rate_hz,
    }


def write_csi(tensor: CsiTensor, path) -> None:
    """Write the binary tensor and its sidecar JSON header."""
    path = Path(path)
    values = np.ascontiguousarray(tensor.values.astype(CSI_DTYPE, copy=False))
    path.write_bytes(values.tobytes())
    sidecar_path(path).write_text(
        json.dumps(csi_header(tensor.config), sort_keys=True, indent=2) + "\n"
    )


def read_csi(path) -> CsiTensor:
    """Read a binary CSI file; raises CsiFormatError on corruption."""
    path = Path(path)
    header_file = sidecar_path(path)
    if not header_file.exists():
        raise CsiFormatError(f"missing sidecar header {header_file}")
    try:
        header = json.loads(header_file.read_text())
    except json.JSONDecodeError as exc:
        raise CsiFormatError(f"sidecar header {header_file} is not valid JSON: {exc}") from exc
    try:
        m, k, i = int(header["M"]), int(header["K"]), int(header["I"])
        config = SystemConfig(
            carrier_freq_hz=float(header["carrier_freq_hz"]),
            num_subcarriers=k,
            subcarrier_spacing_hz=float(header["subcarrier_spacing_hz"]),
            num_antennas=m,
            frame_rate_hz=float(header["frame_rate_hz"]),
            num_frames=i,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CsiFormatError(f"bad sidecar header {header_file}: {exc}") from exc

    raw = path.read_bytes()
    expected = m * k * i * CSI_DTYPE.itemsize
    if len(raw) != expected:
        raise CsiFormatError(
            f"corrupt CSI file {path}: expected {expected} bytes for "
            f"M={m} K={k} I={i}, got {len(raw)}"
        )
    values = np.frombuffer(raw, dtype=CSI_DTYPE).reshape(m, k, i)
    return CsiTensor(config=config, values=values)


def _write_two_column(path, header, times, values) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for t, v in zip(times, values):
            writer.writerow([repr(float(t)), repr(float(v))])


def _read_two_column(path, header) -> tuple[np.ndarray, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    if not rows or tuple(rows[0]) != tuple(header):
        raise ValueError(f"{path}: expected header row {','.join(header)}")
    if len(rows) < 2:
        raise ValueError(f"{path}: no data rows")
    data = np.array([[float(a), float(b)] for a, b in rows[1:]])
    return data[:, 0], data[:, 1]


def _rate_from_times(times: np.ndarray, path) -> float:
    if times.size < 2:
        raise ValueError(f"{path}: need at least two samples to infer the rate")
    span = times[-1] - times[0]
    if span <= 0:
        raise ValueError(f"{path}: time column must be increasing")
    return (times.size - 1) / span


def write_ground_truth(waveform: BreathingWaveform, path) -> None:
    times = np.arange(len(waveform)) / waveform.rate_hz
    _write_two_column(path, GT_HEADER, times, waveform.samples)


def read_ground_truth(path) -> GroundTruth:
    times, values = _read_two_column(path, GT_HEADER)
    return GroundTruth(samples=values, rate_hz=_rate_from_times(times, path))


def write_estimate(samples: np.ndarray, rate_hz: float, path) -> None:
    times = np.arange(len(samples)) / rate_hz
    _write_two_column(path, EST_HEADER, times, samples)


def read_estimate(path) -> tuple[np.ndarray, float]:
    """Return (samples, rate_hz) of an estimate CSV."""
    times, values = _read_two_column(path, EST_HEADER)
    return values, _rate_from_times(times, path)
