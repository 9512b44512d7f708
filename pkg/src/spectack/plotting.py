"""Figure rendering for the report commands.

Everything draws to files through the Agg backend so the CLI works headless;
each helper takes a finished result object and a target path.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .experiments import ApproxQualityResult, CorrelationResult

__all__ = ["plot_approx_quality", "plot_correlation"]


def plot_approx_quality(result: ApproxQualityResult, path: str) -> None:
    """Scatter of approximated vs true eigenvalues, both tracking modes,
    with the identity line for reference."""
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    ax.scatter(
        result.true_value,
        result.approx_without_restart,
        s=4,
        alpha=0.35,
        color="tab:orange",
        label=f"no recompute (MAE {result.mae_without_restart:.2e})",
    )
    ax.scatter(
        result.true_value,
        result.approx_with_restart,
        s=4,
        alpha=0.35,
        color="tab:blue",
        label=f"with recompute (MAE {result.mae_with_restart:.2e})",
    )
    lo = float(min(result.true_value.min(), -1.0))
    hi = float(max(result.true_value.max(), 1.0))
    ax.plot([lo, hi], [lo, hi], color="black", linewidth=0.8, linestyle="--")
    ax.set_xlabel("true eigenvalue")
    ax.set_ylabel("approximated eigenvalue")
    ax.set_title(
        f"{result.kind}: {result.repeats} repeats, {result.n_flips} flips each"
    )
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_correlation(result: CorrelationResult, path: str) -> None:
    """Scatter of exact filter distance vs chained damage bound, annotated
    with the two correlation coefficients."""
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    ax.scatter(result.l1_exact, result.l2_approx, s=10, alpha=0.6, color="tab:blue")
    ax.set_xlabel("exact filter distance")
    ax.set_ylabel("approximated spectral damage bound")
    ax.set_title(
        f"{result.n_samples} samples, {result.flips_per_sample} flips each, k={result.k}"
    )
    ax.annotate(
        f"Pearson {result.pearson:.3f}\nSpearman {result.spearman:.3f}",
        xy=(0.05, 0.92),
        xycoords="axes fraction",
        fontsize=9,
        verticalalignment="top",
    )
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
