"""Collapse the subcarrier axis of one antenna into a complex range signal.

The inverse DFT convention is fixed as

    cir[tau] = (1/K) * sum_k h[k] * exp(+j 2 pi k tau / K),   tau = 0..K-1,

(1/K forward factor, e^{+j} kernel), which is exactly ``numpy.fft.ifft``.
A single path of length d then peaks at bin round(d / range_resolution) mod K.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import CsiTensor

GAMMA_GRID_STEPS = 1024  # DiverSense angle grid over [0, 2*pi)


@dataclass(frozen=True)
class RangeSignal:
    """Complex per-frame signal of one antenna after subcarrier combining."""

    samples: np.ndarray = field(repr=False)
    antenna_index: int
    method: str
    selected_bin: int | None = None
    steering_angles: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.complex128)
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        if not np.all(np.isfinite(samples)):
            raise ValueError("range signal must be finite")
        if self.steering_angles is not None:
            angles = np.asarray(self.steering_angles, dtype=np.float64)
            angles.setflags(write=False)
            object.__setattr__(self, "steering_angles", angles)
            if np.any(angles < 0.0) or np.any(angles >= 2.0 * np.pi):
                raise ValueError("steering angles must lie in [0, 2*pi)")

    def __len__(self) -> int:
        return int(self.samples.size)


@dataclass(frozen=True)
class AlignmentCost:
    """Per-subcarrier residual of DiverSense alignment at chosen angles."""

    residuals: np.ndarray

    def __post_init__(self):
        residuals = np.asarray(self.residuals, dtype=np.float64)
        residuals.setflags(write=False)
        object.__setattr__(self, "residuals", residuals)
        if np.any(residuals < 0.0):
            raise ValueError("alignment residuals must be >= 0")


def single_subcarrier(csi: CsiTensor, m: int, k: int) -> RangeSignal:
    """Use one subcarrier of one antenna verbatim (the SASS baseline)."""
    _check_antenna(csi, m)
    if not 0 <= k < csi.config.num_subcarriers:
        raise IndexError(f"subcarrier {k} out of range [0, {csi.config.num_subcarriers})")
    return RangeSignal(
        samples=csi.values[m, k, :],
        antenna_index=m,
        method="single-subcarrier",
    )


def cir(csi: CsiTensor, m: int, i: int) -> np.ndarray:
    """Channel impulse response of antenna m at frame i (length-K IDFT)."""
    _check_antenna(csi, m)
    if not 0 <= i < csi.config.num_frames:
        raise IndexError(f"frame {i} out of range [0, {csi.config.num_frames})")
    return np.fft.ifft(csi.values[m, :, i])


def idft_range_signal(csi: CsiTensor, m: int) -> RangeSignal:
    """Pick the strongest delay bin of the time-averaged CIR magnitude.

    The bin index is chosen once from the average over all frames (per-frame
    argmax can hop bins under noise and destroy phase continuity); the range
    signal is the complex CIR coefficient at that fixed bin per frame.
    """
    _check_antenna(csi, m)
    profile = np.fft.ifft(csi.values[m], axis=0)  # (K, I)
    bin_index = int(np.argmax(np.mean(np.abs(profile), axis=1)))
    return RangeSignal(
        samples=profile[bin_index, :],
        antenna_index=m,
        method="idft",
        selected_bin=bin_index,
    )


def diversense_align(
    csi: CsiTensor,
    m: int,
    reference_k: int = 0,
    mode: str = "closed-form",
) -> RangeSignal:
    """Rotate every subcarrier onto a reference and average them coherently.

    For each subcarrier the steering angle gamma_k minimizes

        D_k(gamma) = (1/I) * sum_i |h_ref[i] - h_k[i] * exp(-j gamma)|^2.

    ``closed-form`` uses the analytic minimizer
    gamma_k = arg(sum_i h_k[i] * conj(h_ref[i])); ``grid`` evaluates D_k on a
    uniform 1024-step grid over [0, 2*pi) (verification mode, O(K*I*grid)).
    """
    _check_antenna(csi, m)
    k_count = csi.config.num_subcarriers
    if not 0 <= reference_k < k_count:
        raise IndexError(f"reference subcarrier {reference_k} out of range [0, {k_count})")

    rows = csi.values[m]  # (K, I)
    ref = rows[reference_k]
    if mode == "closed-form":
        cross = rows @ ref.conj()  # (K,)
        gammas = np.mod(np.angle(cross), 2.0 * np.pi)
    elif mode == "grid":
        grid = gamma_grid()
        gammas = np.empty(k_count)
        for k in range(k_count):
            costs = np.mean(
                np.abs(ref[None, :] - rows[k][None, :] * np.exp(-1.0j * grid)[:, None]) ** 2,
                axis=1,
            )
            gammas[k] = grid[int(np.argmin(costs))]
    else:
        raise ValueError(f"unknown alignment mode {mode!r}")

    gammas[reference_k] = 0.0
    combined = np.mean(rows * np.exp(-1.0j * gammas)[:, None], axis=0)
    return RangeSignal(
        samples=combined,
        antenna_index=m,
        method="diversense",
        steering_angles=gammas,
    )


def alignment_cost(
    csi: CsiTensor,
    m: int,
    gammas: np.ndarray,
    reference_k: int = 0,
) -> AlignmentCost:
    """Evaluate the DiverSense distance D_k at given steering angles."""
    _check_antenna(csi, m)
    rows = csi.values[m]
    gammas = np.asarray(gammas, dtype=np.float64)
    if gammas.shape != (csi.config.num_subcarriers,):
        raise ValueError("one steering angle per subcarrier is required")
    ref = rows[reference_k]
    diffs = ref[None, :] - rows * np.exp(-1.0j * gammas)[:, None]
    return AlignmentCost(residuals=np.mean(np.abs(diffs) ** 2, axis=1))


def gamma_grid() -> np.ndarray:
    """Uniform steering-angle grid over [0, 2*pi)."""
    return np.arange(GAMMA_GRID_STEPS) * (2.0 * np.pi / GAMMA_GRID_STEPS)


def _check_antenna(csi: CsiTensor, m: int) -> None:
    if not 0 <= m < csi.config.num_antennas:
        raise IndexError(f"antenna {m} out of range [0, {csi.config.num_antennas})")
