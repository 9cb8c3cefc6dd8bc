"""Physics-based synthetic CSI generation.

The channel is a coherent sum of multipath components,

    h[m, k, i] = sum_l  alpha_l * exp(-j 2 pi (f_c + k df) tau[m, l, i]),

with per-path delay

    tau[m, l, i] = (d_l + b[i] cos(beta_l / 2)) / c  +  m * s * sin(theta_l) / c,

i.e. the bulk path delay (stretched by chest displacement for modulated
paths) plus the uniform-linear-array inter-element delay with spacing s.
The displacement term is shared by all antennas and subcarriers of a path,
so the exponential factorizes into a static (m, k) grid and a dynamic
(k, i) grid; the simulator exploits that instead of evaluating the
exponential per tensor entry.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .errors import DegenerateSignalError
from .model import (
    SPEED_OF_LIGHT,
    BreathingWaveform,
    CsiTensor,
    NoiseSpec,
    PathSpec,
    SystemConfig,
)

BREATH_PATTERNS = ("sinusoid", "varying-rate", "recorded-csv")

# In-band patterns must stay between 5 and 35 breaths per minute.
MIN_RATE_BPM = 5.0
MAX_RATE_BPM = 35.0


def generate_breathing(
    pattern: str,
    rate_bpm: float,
    amplitude_m: float,
    config: SystemConfig,
    *,
    rate_end_bpm: float | None = None,
    recorded: BreathingWaveform | None = None,
) -> BreathingWaveform:
    """Build a ground-truth chest-displacement waveform at the frame rate.

    Patterns:
      * ``sinusoid``: b[i] = amplitude * sin(2 pi rate_bpm/60 * i * T_s)
      * ``varying-rate``: linear chirp from ``rate_bpm`` to ``rate_end_bpm``
        over the record duration
      * ``recorded-csv``: resample a previously recorded waveform onto the
        configured frame grid (pass it via ``recorded``)
    """
    n = config.num_frames
    t = np.arange(n) / config.frame_rate_hz

    if pattern == "sinusoid":
        _check_rate(rate_bpm)
        samples = amplitude_m * np.sin(2.0 * np.pi * (rate_bpm / 60.0) * t)
    elif pattern == "varying-rate":
        if rate_end_bpm is None:
            raise ValueError("varying-rate pattern needs rate_end_bpm")
        _check_rate(rate_bpm)
        _check_rate(rate_end_bpm)
        f0 = rate_bpm / 60.0
        f1 = rate_end_bpm / 60.0
        duration = config.duration_s
        phase = 2.0 * np.pi * (f0 * t + (f1 - f0) * t**2 / (2.0 * duration))
        samples = amplitude_m * np.sin(phase)
    elif pattern == "recorded-csv":
        if recorded is None:
            raise ValueError("recorded-csv pattern needs a recorded waveform")
        src_t = np.arange(len(recorded)) / recorded.rate_hz
        samples = np.interp(t, src_t, recorded.samples)
    else:
        raise ValueError(f"unknown breathing pattern {pattern!r}")

    return BreathingWaveform(samples=samples, rate_hz=config.frame_rate_hz)


def _check_rate(rate_bpm: float) -> None:
    if not (MIN_RATE_BPM <= rate_bpm <= MAX_RATE_BPM):
        raise ValueError(
            f"rate_bpm {rate_bpm} outside the in-band range "
            f"[{MIN_RATE_BPM}, {MAX_RATE_BPM}]"
        )


def simulate_csi(
    config: SystemConfig,
    paths: Sequence[PathSpec],
    breathing: BreathingWaveform,
    noise: NoiseSpec | None = None,
    seed: int = 0,
) -> CsiTensor:
    """Simulate the CSI tensor of one uniform linear array.

    Parameters
    ----------
    config : SystemConfig
        OFDM/array parameters; all ``config.num_antennas`` elements form one
        ULA seeing the same path set.
    paths : sequence of PathSpec
        At least one propagation path.
    breathing : BreathingWaveform
        Chest displacement, one sample per frame.
    noise : NoiseSpec or None
        None keeps the channel noiseless; otherwise circularly-symmetric
        complex white noise at ``snr_db`` relative to mean signal power.
    seed : int
        Seeds the noise generator; identical inputs and seed give
        bit-identical tensors.
    """
    if not paths:
        raise ValueError("at least one path is required")
    if len(breathing) != config.num_frames:
        raise ValueError(
            f"breathing length {len(breathing)} != num_frames {config.num_frames}"
        )

    values = _noiseless_csi(config, paths, breathing)
    if noise is not None:
        add_noise(values, noise.snr_db, np.random.default_rng(seed))
    return CsiTensor(config=config, values=values)


def _noiseless_csi(
    config: SystemConfig,
    paths: Sequence[PathSpec],
    breathing: BreathingWaveform,
    out: np.ndarray | None = None,
) -> np.ndarray:
    m_count, k_count, i_count = (
        config.num_antennas,
        config.num_subcarriers,
        config.num_frames,
    )
    freqs = config.carrier_freq_hz + np.arange(k_count) * config.subcarrier_spacing_hz
    steer = np.arange(m_count) * config.element_spacing_m
    wavenum = -2.0j * np.pi / SPEED_OF_LIGHT

    if out is None:
        out = np.zeros((m_count, k_count, i_count), dtype=np.complex128)
    static_total = np.zeros((m_count, k_count), dtype=np.complex128)
    for path in paths:
        lengths = path.base_length_m + steer * np.sin(path.aoa_rad)  # (M,)
        static = complex(path.amplitude) * np.exp(wavenum * np.outer(lengths, freqs))
        if path.breathing_modulated:
            disp = breathing.samples * np.cos(path.bistatic_angle_rad / 2.0)  # (I,)
            dynamic = np.exp(wavenum * np.outer(freqs, disp))  # (K, I)
            # Antenna-chunked accumulation keeps the temporaries at (K, I).
            for m in range(m_count):
                out[m] += static[m][:, None] * dynamic
        else:
            static_total += static
    out += static_total[:, :, None]
    return out


def add_noise(values: np.ndarray, snr_db: float, rng: np.random.Generator) -> None:
    """Add complex white noise in place, scaled to mean signal power.

    Noise is drawn antenna by antenna at the tensor's own precision as
    interleaved (re, im) pairs, which bounds the temporary buffers on
    testbed-sized tensors.
    """
    real_dtype = np.float32 if values.dtype == np.complex64 else np.float64
    components = values.view(real_dtype).ravel()
    signal_power = float(np.dot(components, components)) / values.size
    if signal_power == 0.0:
        raise DegenerateSignalError("cannot scale noise to an all-zero signal")
    sigma = np.sqrt(signal_power * 10.0 ** (-snr_db / 10.0) / 2.0)
    k_count, i_count = values.shape[1:]
    buf = np.empty((k_count, 2 * i_count), dtype=real_dtype)
    for m in range(values.shape[0]):
        rng.standard_normal(dtype=real_dtype, out=buf)
        np.multiply(buf, sigma, out=buf)
        values[m] += buf.view(values.dtype)
