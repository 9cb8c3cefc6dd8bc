"""Respiration sensing from cell-free massive MIMO-OFDM uplink CSI."""

from .combining import AntennaStack, CombinedEstimate, normalize_estimate, wac
from .errors import CsiFormatError, DegenerateSignalError, NoBreathDetected
from .evaluation import (
    CdfCurve,
    GroundTruth,
    ScoreRecord,
    correlation_score,
    empirical_cdf,
    estimate_bpm,
    resample,
)
from .fileio import read_csi, read_ground_truth, write_csi, write_ground_truth
from .model import (
    BreathingWaveform,
    CsiTensor,
    DerivedConstants,
    NoiseSpec,
    PathSpec,
    SystemConfig,
    derived_constants,
)
from .pipeline import EstimateResult, estimate_breathing
from .projection import BreathBand, BreathEstimate, best_projection, bnr, project
from .scenes import AntennaGroup, minimal_scene, paper_like_scene, simulate_scene
from .simulate import generate_breathing, simulate_csi
from .subcarrier import (
    AlignmentCost,
    RangeSignal,
    alignment_cost,
    cir,
    diversense_align,
    idft_range_signal,
    single_subcarrier,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentCost",
    "AntennaGroup",
    "AntennaStack",
    "BreathBand",
    "BreathEstimate",
    "BreathingWaveform",
    "CdfCurve",
    "CombinedEstimate",
    "CsiFormatError",
    "CsiTensor",
    "DegenerateSignalError",
    "DerivedConstants",
    "EstimateResult",
    "GroundTruth",
    "NoBreathDetected",
    "NoiseSpec",
    "PathSpec",
    "RangeSignal",
    "ScoreRecord",
    "SystemConfig",
    "alignment_cost",
    "best_projection",
    "bnr",
    "cir",
    "correlation_score",
    "derived_constants",
    "diversense_align",
    "empirical_cdf",
    "estimate_bpm",
    "estimate_breathing",
    "generate_breathing",
    "idft_range_signal",
    "minimal_scene",
    "normalize_estimate",
    "paper_like_scene",
    "project",
    "read_csi",
    "read_ground_truth",
    "resample",
    "simulate_csi",
    "simulate_scene",
    "single_subcarrier",
    "wac",
    "write_csi",
    "write_ground_truth",
]
