"""Scene presets and cell-free (multi-array) channel simulation.

A scene is a list of antenna groups; each group is one uniform linear array
with its own path geometry (angles, lengths, gains), which is how the
distributed-array layout enters the simulator. Groups are simulated
independently and stacked along the antenna axis, then noise is added once
over the full tensor.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .model import BreathingWaveform, CsiTensor, NoiseSpec, PathSpec, SystemConfig
from .simulate import _noiseless_csi, add_noise

PRESETS = ("paper-like", "minimal")


@dataclass(frozen=True)
class AntennaGroup:
    """One antenna array and the paths it observes."""

    num_antennas: int
    paths: tuple[PathSpec, ...]

    def __init__(self, num_antennas: int, paths: Sequence[PathSpec]):
        if num_antennas < 1:
            raise ValueError("num_antennas must be >= 1")
        paths = tuple(paths)
        if not paths:
            raise ValueError("each group needs at least one path")
        object.__setattr__(self, "num_antennas", int(num_antennas))
        object.__setattr__(self, "paths", paths)


def simulate_scene(
    config: SystemConfig,
    groups: Sequence[AntennaGroup],
    breathing: BreathingWaveform,
    noise: NoiseSpec | None = None,
    seed: int = 0,
    dtype=np.complex128,
    out: np.ndarray | None = None,
) -> CsiTensor:
    """Simulate all antenna groups of a scene into one CSI tensor.

    ``dtype`` may be complex64 to halve memory on testbed-sized tensors;
    the file format stores complex64 anyway. ``out`` lets batch callers
    reuse one tensor buffer (its content is overwritten).
    """
    groups = list(groups)
    total = sum(g.num_antennas for g in groups)
    if total != config.num_antennas:
        raise ValueError(
            f"groups hold {total} antennas but config expects {config.num_antennas}"
        )
    shape = (config.num_antennas, config.num_subcarriers, config.num_frames)
    if out is None:
        values = np.zeros(shape, dtype=dtype)
    else:
        if out.shape != shape or out.dtype != np.dtype(dtype):
            raise ValueError(f"out buffer must be {shape} of {np.dtype(dtype)}")
        values = out
        values.fill(0)
    offset = 0
    for group in groups:
        sub = replace(config, num_antennas=group.num_antennas)
        _noiseless_csi(
            sub, group.paths, breathing, out=values[offset : offset + group.num_antennas]
        )
        offset += group.num_antennas
    if noise is not None:
        add_noise(values, noise.snr_db, np.random.default_rng(seed))
    return CsiTensor(config=config, values=values)


def minimal_scene() -> list[AntennaGroup]:
    """Single antenna, two paths: a static LoS and a breathing-modulated one."""
    return [
        AntennaGroup(
            num_antennas=1,
            paths=(
                PathSpec(amplitude=1.0, base_length_m=4.0),
                PathSpec(
                    amplitude=0.4,
                    base_length_m=4.5,
                    aoa_rad=0.3,
                    bistatic_angle_rad=0.8,
                    breathing_modulated=True,
                ),
            ),
        )
    ]


def paper_like_scene(
    rng: np.random.Generator,
    ue_distance_m: float | None = None,
    num_groups: int = 8,
    antennas_per_group: int = 8,
) -> list[AntennaGroup]:
    """Distributed arrays around a seated subject, testbed style.

    Eight 8-antenna arrays by default. Per array the geometry (subject
    distance, angle of arrival, bistatic angle) and the static clutter are
    randomized, which is what makes estimation quality vary across antennas.
    The UE sits 0.5 to 1.5 m from the subject.
    """
    if ue_distance_m is None:
        ue_distance_m = float(rng.uniform(0.5, 1.5))
    if not 0.0 < ue_distance_m < 10.0:
        raise ValueError("ue_distance_m must be in (0, 10)")

    groups = []
    for _ in range(num_groups):
        array_dist = float(rng.uniform(2.5, 6.0))
        aoa = float(rng.uniform(-1.0, 1.0))
        bistatic = float(rng.uniform(0.2, 2.4))
        chest_len = ue_distance_m + array_dist
        los_len = max(0.5, array_dist + ue_distance_m * float(rng.uniform(-0.8, 0.8)))

        paths = [
            # Direct UE -> array path, static.
            PathSpec(
                amplitude=3.0 / los_len * _phasor(rng),
                base_length_m=los_len,
                aoa_rad=aoa + float(rng.uniform(-0.1, 0.1)),
            ),
            # Reflection off the chest, breathing modulated.
            PathSpec(
                amplitude=1.5 / chest_len * _phasor(rng),
                base_length_m=chest_len,
                aoa_rad=aoa,
                bistatic_angle_rad=bistatic,
                breathing_modulated=True,
            ),
        ]
        # Two static clutter reflections.
        for _ in range(2):
            clutter_len = los_len + float(rng.uniform(1.0, 12.0))
            paths.append(
                PathSpec(
                    amplitude=float(rng.uniform(0.5, 1.5)) / clutter_len * _phasor(rng),
                    base_length_m=clutter_len,
                    aoa_rad=float(rng.uniform(-1.0, 1.0)),
                )
            )
        groups.append(AntennaGroup(num_antennas=antennas_per_group, paths=paths))
    return groups


def _phasor(rng: np.random.Generator) -> complex:
    return complex(np.exp(1.0j * rng.uniform(0.0, 2.0 * np.pi)))
