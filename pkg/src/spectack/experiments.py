"""Reproducible analysis experiments behind the CLI report commands.

Two studies: (1) approximation quality — how close incrementally tracked
eigenvalues stay to an exact solve after a sequence of random flips, with
and without the error-triggered recompute; (2) objective correlation — how
well the chained spectral damage bound tracks the exact filter-distance
objective across random flip sets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .attack import sample_candidates
from .graph import Graph, flip
from .generators import (
    gen_barabasi_albert,
    gen_erdos_renyi,
    gen_powerlaw_cluster,
    gen_watts_strogatz,
)
from .spectral import EigenTracker, generalized_eigh, l1_objective, l2_lower_bound
from .victim import pearson, spearman

__all__ = [
    "GENERATOR_PRESETS",
    "make_graph",
    "ApproxQualityResult",
    "approx_quality",
    "CorrelationResult",
    "correlation_samples",
]

# Synthetic corpus presets: 1000 nodes, average degree about 10.
GENERATOR_PRESETS: dict[str, dict[str, float]] = {
    "er": {"n": 1000, "p": 0.01},
    "ba": {"n": 1000, "m": 5},
    "ws": {"n": 1000, "ring_k": 10, "p_rewire": 0.1},
    "plc": {"n": 1000, "m": 5, "p_triangle": 0.1},
}


def make_graph(kind: str, seed: int, **params) -> Graph:
    """Dispatch to a generator by short kind name (er, ba, ws, plc)."""
    if kind == "er":
        return gen_erdos_renyi(int(params["n"]), float(params["p"]), seed)
    if kind == "ba":
        return gen_barabasi_albert(int(params["n"]), int(params["m"]), seed)
    if kind == "ws":
        return gen_watts_strogatz(
            int(params["n"]), int(params["ring_k"]), float(params["p_rewire"]), seed
        )
    if kind == "plc":
        return gen_powerlaw_cluster(
            int(params["n"]), int(params["m"]), float(params["p_triangle"]), seed
        )
    raise ValueError(f"unknown generator kind {kind!r} (expected er, ba, ws, or plc)")


def _child_seed(*entropy: int) -> int:
    return int(np.random.SeedSequence(list(entropy)).generate_state(1)[0])


@dataclass
class ApproxQualityResult:
    """Pooled per-eigenvalue comparison across all repeats.

    The four arrays are parallel: one entry per (repeat, eigenvalue index)
    pair, true values from an exact solve of the final flipped graph,
    approximations from the tracked systems.
    """

    kind: str
    repeats: int
    n_flips: int
    eigen_index: np.ndarray
    true_value: np.ndarray
    approx_with_restart: np.ndarray
    approx_without_restart: np.ndarray
    mae_with_restart: float = 0.0
    mae_without_restart: float = 0.0
    pearson_with_restart: float = 0.0
    pearson_without_restart: float = 0.0
    restarts_with: int = 0
    restarts_without: int = 0

    def finalize(self) -> "ApproxQualityResult":
        self.mae_with_restart = float(
            np.mean(np.abs(self.approx_with_restart - self.true_value))
        )
        self.mae_without_restart = float(
            np.mean(np.abs(self.approx_without_restart - self.true_value))
        )
        self.pearson_with_restart = pearson(self.true_value, self.approx_with_restart)
        self.pearson_without_restart = pearson(
            self.true_value, self.approx_without_restart
        )
        return self


def approx_quality(
    kind: str,
    params: dict | None = None,
    n_flips: int = 10,
    repeats: int = 100,
    tau: float = 0.03,
    seed: int = 0,
    zero_tol: float = 1e-6,
    ortho_mode: str = "auto",
    ortho_pairs: int = 4096,
) -> ApproxQualityResult:
    """Eigenvalue tracking quality over repeated random-flip experiments.

    Each repeat generates a fresh graph, draws n_flips distinct random
    pairs, and pushes the identical flip sequence through two trackers: one
    with the Gram-error recompute trigger at tau, one with the trigger
    disabled. The final graph is then solved exactly and all three spectra
    are recorded index-by-index (descending order).
    """
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    if n_flips < 0:
        raise ValueError(f"n_flips must be >= 0, got {n_flips}")
    params = dict(GENERATOR_PRESETS[kind] if params is None else params)

    idx_col: list[np.ndarray] = []
    true_col: list[np.ndarray] = []
    with_col: list[np.ndarray] = []
    without_col: list[np.ndarray] = []
    restarts_with = 0
    restarts_without = 0
    for r in range(repeats):
        g = make_graph(kind, _child_seed(seed, r, 0), **params)
        flips = (
            sample_candidates(g, n_flips, _child_seed(seed, r, 1)) if n_flips else []
        )
        base = generalized_eigh(g)
        tracked = EigenTracker(
            g,
            es=base,
            tau=tau,
            zero_tol=zero_tol,
            ortho_mode=ortho_mode,
            ortho_pairs=ortho_pairs,
        )
        drifting = EigenTracker(
            g,
            es=base,
            tau=None,
            zero_tol=zero_tol,
            ortho_mode=ortho_mode,
            ortho_pairs=ortho_pairs,
        )
        for f in flips:
            tracked.apply_flip(f)
            drifting.apply_flip(f)
        exact = generalized_eigh(tracked.graph)
        idx_col.append(np.arange(g.n))
        true_col.append(exact.lambdas)
        with_col.append(tracked.es.lambdas)
        without_col.append(drifting.es.lambdas)
        restarts_with += tracked.restarts
        restarts_without += drifting.restarts

    return ApproxQualityResult(
        kind=kind,
        repeats=repeats,
        n_flips=n_flips,
        eigen_index=np.concatenate(idx_col),
        true_value=np.concatenate(true_col),
        approx_with_restart=np.concatenate(with_col),
        approx_without_restart=np.concatenate(without_col),
        restarts_with=restarts_with,
        restarts_without=restarts_without,
    ).finalize()


@dataclass
class CorrelationResult:
    """Exact objective vs chained damage bound across random flip sets."""

    n_samples: int
    flips_per_sample: int
    k: int
    l1_exact: np.ndarray
    l2_approx: np.ndarray
    pearson: float = 0.0
    spearman: float = 0.0


def correlation_samples(
    g: Graph,
    n_samples: int,
    flips_per_sample: int = 1,
    k: int = 1,
    seed: int = 0,
    zero_tol: float = 1e-6,
) -> CorrelationResult:
    """Draw n_samples random flip sets; for each, compute the exact filter
    distance and the purely first-order chained damage bound (no
    error-triggered recomputes — the point is to test the approximation).

    Raises ValueError when either statistic is constant across samples.
    """
    if n_samples < 3:
        raise ValueError(f"n_samples must be >= 3, got {n_samples}")
    if flips_per_sample < 1:
        raise ValueError(f"flips_per_sample must be >= 1, got {flips_per_sample}")
    es0 = generalized_eigh(g)
    lam0 = es0.lambdas.copy()

    l1_vals = np.empty(n_samples)
    l2_vals = np.empty(n_samples)
    for i in range(n_samples):
        flips = sample_candidates(g, flips_per_sample, _child_seed(seed, i))
        tracker = EigenTracker(g, es=es0, tau=None, zero_tol=zero_tol)
        g_cur = g
        for f in flips:
            tracker.apply_flip(f)
            g_cur = flip(g_cur, f)
        l1_vals[i] = l1_objective(g, g_cur, k)
        l2_vals[i] = l2_lower_bound(lam0, tracker.es.lambdas, k)

    return CorrelationResult(
        n_samples=n_samples,
        flips_per_sample=flips_per_sample,
        k=k,
        l1_exact=l1_vals,
        l2_approx=l2_vals,
        pearson=pearson(l1_vals, l2_vals),
        spearman=spearman(l1_vals, l2_vals),
    )
