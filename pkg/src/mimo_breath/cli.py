"""Batch command line: simulate -> estimate -> evaluate -> report.

Every failure exits nonzero with a single ``mimo-breath: error: ...`` line on
stderr. Identical configs and seeds produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .evaluation import METHODS, ScoreRecord, correlation_score, empirical_cdf, estimate_bpm, resample
from .fileio import (
    read_csi,
    read_estimate,
    read_ground_truth,
    write_csi,
    write_estimate,
    write_ground_truth,
)
from .model import BreathingWaveform, NoiseSpec, PathSpec, SystemConfig, derived_constants
from .pipeline import METHOD_LABELS, estimate_breathing
from .scenes import AntennaGroup, minimal_scene, paper_like_scene, simulate_scene
from .simulate import generate_breathing

CSI_FILENAME = "csi.bin"
GT_FILENAME = "ground_truth.csv"


@dataclass(frozen=True)
class RunConfig:
    """One simulation run, JSON-configurable; defaults mirror the testbed."""

    system: SystemConfig = field(default_factory=SystemConfig)
    scene: object = "paper-like"
    breathing: dict = field(default_factory=lambda: {"pattern": "sinusoid", "rate_bpm": 15.0, "amplitude_m": 0.005})
    noise: NoiseSpec | None = field(default_factory=lambda: NoiseSpec(snr_db=10.0))
    methods: tuple[str, ...] = tuple(sorted(METHOD_LABELS))
    seed: int = 0

    def __post_init__(self):
        if not self.methods:
            raise ValueError("at least one method is required")
        for method in self.methods:
            if method not in METHOD_LABELS:
                raise ValueError(f"unknown method {method!r}")

    @classmethod
    def from_json(cls, path) -> "RunConfig":
        data = json.loads(Path(path).read_text())
        if not isinstance(data, dict):
            raise ValueError("run config must be a JSON object")
        known = {"system", "scene", "breathing", "noise", "methods", "seed"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        kwargs = {}
        if "system" in data:
            kwargs["system"] = SystemConfig(**data["system"])
        if "scene" in data:
            kwargs["scene"] = data["scene"]
        if "breathing" in data:
            kwargs["breathing"] = dict(data["breathing"])
        if "noise" in data:
            kwargs["noise"] = None if data["noise"] is None else NoiseSpec(**data["noise"])
        if "methods" in data:
            kwargs["methods"] = tuple(data["methods"])
        if "seed" in data:
            kwargs["seed"] = int(data["seed"])
        return cls(**kwargs)


def build_scene(scene_spec, system: SystemConfig, seed: int) -> list[AntennaGroup]:
    """Resolve a preset name, preset dict, or explicit group list."""
    if isinstance(scene_spec, str):
        scene_spec = {"preset": scene_spec}
    if isinstance(scene_spec, dict):
        preset = scene_spec.get("preset")
        if preset == "minimal":
            return minimal_scene()
        if preset == "paper-like":
            num_groups = int(scene_spec.get("num_groups", 8))
            per_group, rem = divmod(system.num_antennas, num_groups)
            if rem or per_group < 1:
                raise ValueError(
                    f"{system.num_antennas} antennas do not divide into {num_groups} groups"
                )
            return paper_like_scene(
                np.random.default_rng([seed, 1]),
                ue_distance_m=scene_spec.get("ue_distance_m"),
                num_groups=num_groups,
                antennas_per_group=per_group,
            )
        raise ValueError(f"unknown scene preset {preset!r}")
    if isinstance(scene_spec, list):
        return [
            AntennaGroup(
                num_antennas=int(group["num_antennas"]),
                paths=[_path_from_dict(p) for p in group["paths"]],
            )
            for group in scene_spec
        ]
    raise ValueError("scene must be a preset name, a preset object, or a group list")


def _path_from_dict(data: dict) -> PathSpec:
    amp = data["amplitude"]
    if isinstance(amp, (list, tuple)):
        amp = complex(amp[0], amp[1])
    return PathSpec(
        amplitude=complex(amp),
        base_length_m=float(data["base_length_m"]),
        aoa_rad=float(data.get("aoa_rad", 0.0)),
        bistatic_angle_rad=float(data.get("bistatic_angle_rad", 0.0)),
        breathing_modulated=bool(data.get("breathing_modulated", False)),
    )


def build_breathing(spec: dict, system: SystemConfig) -> BreathingWaveform:
    spec = dict(spec)
    pattern = spec.pop("pattern", "sinusoid")
    kwargs = {
        "rate_bpm": float(spec.pop("rate_bpm", 15.0)),
        "amplitude_m": float(spec.pop("amplitude_m", 0.005)),
    }
    if "rate_end_bpm" in spec:
        kwargs["rate_end_bpm"] = float(spec.pop("rate_end_bpm"))
    if "csv_path" in spec:
        kwargs["recorded"] = _recorded_waveform(spec.pop("csv_path"))
    if spec:
        raise ValueError(f"unknown breathing keys: {sorted(spec)}")
    return generate_breathing(pattern, config=system, **kwargs)


def _recorded_waveform(path) -> BreathingWaveform:
    gt = read_ground_truth(path)
    return BreathingWaveform(samples=gt.samples, rate_hz=gt.rate_hz)


def cmd_simulate(args) -> int:
    run = RunConfig.from_json(args.config)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    breathing = build_breathing(run.breathing, run.system)
    groups = build_scene(run.scene, run.system, run.seed)
    tensor = simulate_scene(
        run.system, groups, breathing, noise=run.noise, seed=run.seed, dtype=np.complex64
    )
    write_csi(tensor, out_dir / CSI_FILENAME)
    write_ground_truth(breathing, out_dir / GT_FILENAME)

    constants = derived_constants(run.system)
    print(f"range_resolution_m={constants.range_resolution_m:.6g}")
    print(f"max_unambiguous_range_m={constants.max_unambiguous_range_m:.6g}")
    print(f"wrote {out_dir / CSI_FILENAME} and {out_dir / GT_FILENAME}")
    return 0


def metadata_path(est_path) -> Path:
    return Path(est_path).with_suffix(".meta.json")


def cmd_estimate(args) -> int:
    tensor = read_csi(args.csi)
    result = estimate_breathing(
        tensor,
        args.method,
        antenna=args.antenna,
        subcarrier=args.subcarrier,
        reference_subcarrier=args.reference_subcarrier,
    )
    out = Path(args.out)
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    write_estimate(result.samples, result.frame_rate_hz, out)
    metadata_path(out).write_text(json.dumps(result.metadata(), sort_keys=True, indent=2) + "\n")
    if result.fallback:
        print("warning: no antenna passed the BNR gate; fell back to the best single antenna")
    print(f"wrote {out} and {metadata_path(out)}")
    return 0


def cmd_evaluate(args) -> int:
    est_samples, est_rate = read_estimate(args.est)
    gt = read_ground_truth(args.gt)

    est_duration = est_samples.size / est_rate
    if abs(gt.duration_s - est_duration) > 0.01 * est_duration:
        raise ValueError(
            f"duration mismatch beyond 1%: estimate {est_duration:.3f} s "
            f"vs ground truth {gt.duration_s:.3f} s"
        )

    method = args.method
    if method is None:
        meta_file = metadata_path(args.est)
        if not meta_file.exists():
            raise ValueError(f"--method not given and {meta_file} does not exist")
        method = json.loads(meta_file.read_text()).get("method")
        if method is None:
            raise ValueError(f"{meta_file} has no method field")
    if method in METHOD_LABELS:
        method = METHOD_LABELS[method]

    gt_resampled = resample(gt.samples, gt.rate_hz, est_rate)
    score = correlation_score(est_samples, gt_resampled, est_rate)
    record = ScoreRecord(
        method=method,
        correlation=score,
        est_bpm=_bpm_or_none(est_samples, est_rate),
        gt_bpm=_bpm_or_none(gt_resampled, est_rate),
        run_id=args.run_id or Path(args.est).stem,
    )
    out = Path(args.out)
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(record.to_dict(), sort_keys=True, indent=2) + "\n")
    print(f"correlation={score:.4f} est_bpm={record.est_bpm} gt_bpm={record.gt_bpm}")
    return 0


def _bpm_or_none(series, rate) -> float | None:
    # NoBreathDetected and too-short records both leave the bpm field empty.
    try:
        return estimate_bpm(series, rate)
    except ValueError:
        return None


def cmd_report(args) -> int:
    in_dir = Path(args.in_dir)
    record_files = sorted(in_dir.glob("*.json"))
    if not record_files:
        raise ValueError(f"no score records (*.json) found in {in_dir}")
    records = []
    for record_file in record_files:
        try:
            records.append(ScoreRecord.from_dict(json.loads(record_file.read_text())))
        except (ValueError, TypeError, json.JSONDecodeError) as exc:
            raise ValueError(f"bad score record {record_file}: {exc}") from None

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    from .plots import save_bpm_error_figure, save_cdf_figure

    curves = {}
    errors = {}
    summary = {}
    for method in METHODS:
        group = [r for r in records if r.method == method]
        if not group:
            continue
        curve = empirical_cdf([r.correlation for r in group])
        curves[method] = curve
        slug = method.lower()
        with open(out_dir / f"cdf_{slug}.csv", "w") as fh:
            fh.write("correlation,cumprob\n")
            for x, y in curve.points:
                fh.write(f"{x!r},{y!r}\n")
        bpm_errors = [
            abs(r.est_bpm - r.gt_bpm)
            for r in group
            if r.est_bpm is not None and r.gt_bpm is not None
        ]
        errors[method] = bpm_errors
        correlations = [r.correlation for r in group]
        summary[method] = {
            "count": len(group),
            "mean_correlation": statistics.fmean(correlations),
            "median_correlation": statistics.median(correlations),
            "bpm_error_mean": statistics.fmean(bpm_errors) if bpm_errors else None,
            "bpm_error_median": statistics.median(bpm_errors) if bpm_errors else None,
            "bpm_error_max": max(bpm_errors) if bpm_errors else None,
            "bpm_missing": len(group) - len(bpm_errors),
        }

    (out_dir / "summary.json").write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    save_cdf_figure(curves, out_dir / "cdf.png")
    save_bpm_error_figure(errors, out_dir / "bpm_error.png")
    print(f"wrote {len(summary)} method reports to {out_dir}")
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(f"mimo-breath: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mimo-breath", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate a CSI file and its ground-truth CSV")
    p.add_argument("--config", required=True, help="run-config JSON file")
    p.add_argument("--out-dir", required=True, help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="estimate a breathing waveform from a CSI file")
    p.add_argument("--csi", required=True, help="CSI binary file (sidecar .json expected)")
    p.add_argument("--method", required=True, choices=sorted(METHOD_LABELS))
    p.add_argument("--antenna", type=int, default=0)
    p.add_argument("--subcarrier", type=int, default=0)
    p.add_argument("--reference-subcarrier", type=int, default=0)
    p.add_argument("--out", required=True, help="estimate CSV path")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("evaluate", help="score an estimate CSV against a ground-truth CSV")
    p.add_argument("--est", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--out", required=True, help="score-record JSON path")
    p.add_argument("--method", default=None, help="override the method label")
    p.add_argument("--run-id", default=None)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="aggregate score records into CDFs and figures")
    p.add_argument("--in", dest="in_dir", required=True, help="directory of score-record JSONs")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit:
        raise
    except (ValueError, OSError) as exc:
        print(f"mimo-breath: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
