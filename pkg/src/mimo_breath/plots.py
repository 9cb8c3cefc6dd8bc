"""Figure rendering for the report command (file output only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evaluation import CdfCurve


def save_cdf_figure(curves: dict[str, CdfCurve], path) -> None:
    """One empirical-CDF curve per method, correlation on the x axis."""
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    for method in sorted(curves):
        xs = [p[0] for p in curves[method].points]
        ys = [p[1] for p in curves[method].points]
        # Step from the first score so every curve starts at the x axis.
        ax.step([xs[0]] + xs, [0.0] + ys, where="post", label=method)
    ax.set_xlabel("Correlation coefficient")
    ax.set_ylabel("Empirical CDF")
    ax.set_xlim(0.0, 1.0)
    ax.set_ylim(0.0, 1.0)
    ax.grid(True, linestyle="--", alpha=0.4)
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_bpm_error_figure(errors: dict[str, list[float]], path) -> None:
    """Distribution of |estimated - ground truth| bpm per method."""
    methods = sorted(m for m in errors if errors[m])
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    if methods:
        ax.boxplot(
            [errors[m] for m in methods],
            tick_labels=methods,
            whis=(5, 95),
            showfliers=True,
        )
    ax.set_ylabel("|bpm error|")
    ax.grid(True, axis="y", linestyle="--", alpha=0.4)
    plt.setp(ax.get_xticklabels(), rotation=20, ha="right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
