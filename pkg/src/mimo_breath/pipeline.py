"""End-to-end estimation chains for the four processing methods.

SASS:            one subcarrier of one antenna -> projection
SAMS-IDFT:       IDFT bin selection on one antenna -> projection
SAMS-DiverSense: subcarrier alignment on one antenna -> projection
MAMS-WAC:        per-antenna SAMS-IDFT -> projection -> weighted combining
                 (the IDFT variant is the more robust one, so it feeds WAC)

The per-antenna stage of MAMS-WAC is embarrassingly parallel; the
MIMO_BREATH_THREADS environment variable caps the worker threads.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .combining import AntennaStack, normalize_series, wac
from .model import CsiTensor
from .projection import BreathBand, BreathEstimate, best_projection
from .subcarrier import diversense_align, idft_range_signal, single_subcarrier

THREADS_ENV = "MIMO_BREATH_THREADS"

# CLI method slug -> canonical report label.
METHOD_LABELS = {
    "sass": "SASS",
    "sams-idft": "SAMS-IDFT",
    "sams-diversense": "SAMS-DiverSense",
    "mams-wac": "MAMS-WAC",
}


@dataclass(frozen=True)
class EstimateResult:
    """Normalized breathing estimate plus per-antenna diagnostics."""

    samples: np.ndarray = field(repr=False)
    frame_rate_hz: float
    method: str
    antenna_table: tuple[dict, ...]
    fallback: bool = False

    def metadata(self) -> dict:
        return {
            "method": self.method,
            "frame_rate_hz": self.frame_rate_hz,
            "num_frames": int(len(self.samples)),
            "fallback": self.fallback,
            "antennas": list(self.antenna_table),
        }


def worker_count() -> int:
    """Worker threads for per-antenna stages, capped by MIMO_BREATH_THREADS."""
    workers = os.cpu_count() or 1
    cap = os.environ.get(THREADS_ENV)
    if cap is not None:
        try:
            cap_value = int(cap)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {cap!r}") from None
        if cap_value < 1:
            raise ValueError(f"{THREADS_ENV} must be >= 1")
        workers = min(workers, cap_value)
    return workers


def estimate_breathing(
    csi: CsiTensor,
    method: str,
    *,
    antenna: int = 0,
    subcarrier: int = 0,
    reference_subcarrier: int = 0,
    band: BreathBand | None = None,
) -> EstimateResult:
    """Run one processing chain on a CSI tensor.

    ``method`` is one of the slugs in METHOD_LABELS. ``antenna`` and
    ``subcarrier`` select the row for the single-antenna methods and are
    ignored by mams-wac.
    """
    if method not in METHOD_LABELS:
        raise ValueError(
            f"unknown method {method!r}; expected one of {sorted(METHOD_LABELS)}"
        )
    band = band or BreathBand()
    rate = csi.config.frame_rate_hz

    if method == "mams-wac":
        return _run_wac(csi, band)

    if method == "sass":
        signal = single_subcarrier(csi, antenna, subcarrier)
        extra = {"subcarrier": subcarrier}
    elif method == "sams-idft":
        signal = idft_range_signal(csi, antenna)
        extra = {"selected_bin": signal.selected_bin}
    else:  # sams-diversense
        signal = diversense_align(csi, antenna, reference_k=reference_subcarrier)
        extra = {
            "reference_subcarrier": reference_subcarrier,
            "steering_angles_rad": [float(g) for g in signal.steering_angles],
        }

    est = best_projection(signal, rate, band)
    row = {
        "antenna": antenna,
        "bnr": float(est.bnr),
        "projection_angle_rad": float(est.projection_angle_rad),
        **extra,
    }
    return EstimateResult(
        samples=normalize_series(est.samples),
        frame_rate_hz=rate,
        method=METHOD_LABELS[method],
        antenna_table=(row,),
    )


def _run_wac(csi: CsiTensor, band: BreathBand) -> EstimateResult:
    rate = csi.config.frame_rate_hz

    def per_antenna(m: int) -> tuple[BreathEstimate, int | None]:
        signal = idft_range_signal(csi, m)
        return best_projection(signal, rate, band), signal.selected_bin

    antennas = range(csi.config.num_antennas)
    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(per_antenna, antennas))
    else:
        results = [per_antenna(m) for m in antennas]

    stack = AntennaStack([est for est, _ in results], frame_rate_hz=rate)
    combined = wac(stack)
    table = tuple(
        {
            "antenna": est.antenna_index,
            "bnr": float(est.bnr),
            "projection_angle_rad": float(est.projection_angle_rad),
            "selected_bin": selected_bin,
            "weight": float(combined.weights[idx]),
            "included": bool(combined.included_mask[idx]),
        }
        for idx, (est, selected_bin) in enumerate(results)
    )
    return EstimateResult(
        samples=combined.samples,
        frame_rate_hz=rate,
        method=METHOD_LABELS["mams-wac"],
        antenna_table=table,
        fallback=combined.fallback,
    )
