"""Budgeted edge-flip attackers.

The greedy attacker keeps an incrementally updated eigensolution, scores
every remaining candidate pair by the spectrum-only damage bound it would
add over the ORIGINAL graph's spectrum, applies the argmax flip, and lets
the tracker decide when accumulated first-order error forces an exact
recompute. Two ablations (no error-triggered recompute; one-shot independent
ranking), centrality/random baselines, and a gray-box targeted variant share
the same candidate machinery.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .centrality import betweenness_centrality, degree_centrality, eigenvector_centrality
from .graph import EdgeFlip, Graph, flip, filter_matrix
from .spectral import (
    EigenSystem,
    EigenTracker,
    generalized_eigh,
    l1_objective,
    l2_lower_bound,
)

__all__ = [
    "AttackConfig",
    "AttackResult",
    "SurrogateSpec",
    "sample_candidates",
    "score_candidate",
    "run_stack",
    "run_stack_no_restart",
    "run_stack_independent",
    "run_baseline",
    "run_targeted_ext",
    "BASELINE_STRATEGIES",
]

logger = logging.getLogger(__name__)

BASELINE_STRATEGIES = (
    "random",
    "deg",
    "betw",
    "eigen",
    "small_deg",
    "small_betw",
    "small_eigen",
)

_SCORE_CHUNK = 4096


@dataclass
class AttackConfig:
    """Shared attacker knobs.

    budget_delta counts flips; k is the filter order of the objective; tau
    is the Gram-error threshold that triggers an exact recompute;
    candidate_size pairs are sampled once per run with the given seed.
    """

    budget_delta: int
    k: int = 1
    tau: float = 0.03
    candidate_size: int = 20000
    seed: int = 0
    zero_tol: float = 1e-6
    ortho_mode: str = "auto"  # auto | exact | sampled
    ortho_pairs: int = 4096

    def validate(self, g: Graph) -> None:
        if self.budget_delta < 1:
            raise ValueError(f"budget_delta must be >= 1, got {self.budget_delta}")
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be an integer >= 1, got {self.k!r}")
        if not self.tau > 0:
            raise ValueError(f"tau must be > 0, got {self.tau}")
        total = g.n * (g.n - 1) // 2
        if not 1 <= self.candidate_size <= total:
            raise ValueError(
                f"candidate_size must lie in [1, {total}] for n={g.n}, got {self.candidate_size}"
            )
        if self.candidate_size < self.budget_delta:
            raise ValueError(
                f"candidate_size {self.candidate_size} cannot cover budget {self.budget_delta}"
            )
        if self.ortho_mode not in ("auto", "exact", "sampled"):
            raise ValueError(f"unknown ortho_mode {self.ortho_mode!r}")
        if self.budget_delta > g.num_edges:
            logger.warning(
                "budget %d exceeds the graph's %d edges", self.budget_delta, g.num_edges
            )


@dataclass
class AttackResult:
    """Outcome of one attacker run.

    scores holds the selection-time value per chosen flip: the approximate
    spectral damage bound for the greedy attackers and the targeted variant,
    the endpoint-centrality sum for centrality baselines, and nothing for
    the random baseline (it never scores). final_l2_exact and final_l1 are
    recomputed from exact eigensolutions of the final graph.
    """

    flips: list[EdgeFlip]
    scores: list[float]
    restarts: int
    final_l2_exact: float
    final_l1: float
    exhausted: bool = False


@dataclass
class SurrogateSpec:
    """Gray-box targeted attack inputs: a frozen linear surrogate and a target.

    The surrogate propagates features through the k-th symmetric filter power
    and applies weights; the attack widens the margin of the best wrong class
    over base_class at target_node. gamma weighs the global spectral-damage
    regularizer.
    """

    features: np.ndarray
    weights: np.ndarray
    k: int
    target_node: int
    base_class: int
    gamma: float

    def validate(self, g: Graph) -> None:
        if self.features.ndim != 2 or self.features.shape[0] != g.n:
            raise ValueError(
                f"features must be (n, F) with n={g.n}, got {self.features.shape}"
            )
        if self.weights.ndim != 2 or self.weights.shape[0] != self.features.shape[1]:
            raise ValueError(
                f"weights must be (F, C) with F={self.features.shape[1]}, "
                f"got {self.weights.shape}"
            )
        if self.weights.shape[1] < 2:
            raise ValueError("surrogate needs at least two classes")
        if not 0 <= self.target_node < g.n:
            raise ValueError(f"target_node {self.target_node} out of range for n={g.n}")
        if not 0 <= self.base_class < self.weights.shape[1]:
            raise ValueError(f"base_class {self.base_class} out of range")
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be an integer >= 1, got {self.k!r}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")


# -- candidate machinery -------------------------------------------------------


def sample_candidates(g: Graph, size: int, seed: int) -> list[EdgeFlip]:
    """size distinct node pairs drawn uniformly from all C(n,2) pairs.

    Each pair becomes a flip whose direction is fixed by current membership:
    delete if the edge exists, insert otherwise.
    """
    total = g.n * (g.n - 1) // 2
    if size < 1:
        raise ValueError(f"size must be >= 1, got {size}")
    if size > total:
        raise ValueError(f"size {size} exceeds the {total} distinct pairs of n={g.n}")
    rng = np.random.default_rng(seed)
    idx = rng.choice(total, size=size, replace=False)
    starts = np.concatenate(([0], np.cumsum(np.arange(g.n - 1, 1, -1))))
    p = np.searchsorted(starts, idx, side="right") - 1
    q = idx - starts[p] + p + 1
    return [
        EdgeFlip(int(u), int(v), -1 if g.has_edge(int(u), int(v)) else 1)
        for u, v in zip(p, q)
    ]


def _power_root(lam: np.ndarray, k: int) -> float:
    return float(np.sqrt(np.sum(np.asarray(lam, dtype=float) ** (2 * k))))


def _n_threads() -> int:
    raw = os.environ.get("STACK_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        logger.warning("ignoring non-integer STACK_THREADS=%r", raw)
        return 1


def _score_batch(
    es: EigenSystem,
    base_root: float,
    p: np.ndarray,
    q: np.ndarray,
    dl: np.ndarray,
    k: int,
) -> np.ndarray:
    """Approximate damage bound for a batch of candidate flips.

    Chunked so the (chunk, n) temporaries stay small; chunks are independent
    rows, so results are identical for any chunking or thread count.
    """
    lam = es.lambdas
    u = es.vectors
    out = np.empty(p.shape[0])

    def _chunk(start: int) -> None:
        sl = slice(start, min(start + _SCORE_CHUNK, p.shape[0]))
        a = u[p[sl], :]
        b = u[q[sl], :]
        lamp = lam[None, :] + dl[sl, None] * (
            2.0 * a * b - lam[None, :] * (a * a + b * b)
        )
        out[sl] = (np.sqrt(np.sum(lamp ** (2 * k), axis=1)) - base_root) ** 2

    starts = range(0, p.shape[0], _SCORE_CHUNK)
    threads = _n_threads()
    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(_chunk, starts))
    else:
        for start in starts:
            _chunk(start)
    return out


def score_candidate(
    es_current: EigenSystem, lam_original: np.ndarray, f: EdgeFlip, k: int
) -> float:
    """Damage bound of one flip: first-order eigenvalues of the current
    system measured against the ORIGINAL unperturbed spectrum."""
    return float(
        _score_batch(
            es_current,
            _power_root(lam_original, k),
            np.array([f.p]),
            np.array([f.q]),
            np.array([float(f.delta)]),
            k,
        )[0]
    )


def _sanitize_scores(scores: np.ndarray) -> np.ndarray:
    bad = ~np.isfinite(scores)
    if bad.any():
        logger.warning("skipping %d candidates with non-finite scores", int(bad.sum()))
        scores = scores.copy()
        scores[bad] = -np.inf
    return scores


def _final_metrics(
    g_start: Graph, g_final: Graph, lam0: np.ndarray, k: int
) -> tuple[float, float]:
    es_final = generalized_eigh(g_final)
    return (
        l2_lower_bound(lam0, es_final.lambdas, k),
        l1_objective(g_start, g_final, k),
    )


# -- attackers -----------------------------------------------------------------


def _run_greedy(g: Graph, cfg: AttackConfig, restart: bool) -> AttackResult:
    cfg.validate(g)
    tracker = EigenTracker(
        g,
        tau=cfg.tau if restart else None,
        zero_tol=cfg.zero_tol,
        ortho_mode=cfg.ortho_mode,
        ortho_pairs=cfg.ortho_pairs,
        ortho_seed=cfg.seed,
    )
    lam0 = tracker.es.lambdas.copy()
    base_root = _power_root(lam0, cfg.k)
    cands = sample_candidates(g, cfg.candidate_size, cfg.seed)
    cp = np.array([c.p for c in cands], dtype=np.intp)
    cq = np.array([c.q for c in cands], dtype=np.intp)
    cd = np.array([float(c.delta) for c in cands])
    alive = np.ones(len(cands), dtype=bool)

    flips: list[EdgeFlip] = []
    scores: list[float] = []
    exhausted = False
    for _ in range(cfg.budget_delta):
        live = np.flatnonzero(alive)
        if live.size == 0:
            exhausted = True
            break
        s = _sanitize_scores(
            _score_batch(tracker.es, base_root, cp[live], cq[live], cd[live], cfg.k)
        )
        best = s.max()
        if best == -np.inf:
            exhausted = True
            break
        ties = live[s == best]
        winner = ties[np.lexsort((cq[ties], cp[ties]))[0]]
        f = cands[winner]
        tracker.apply_flip(f)
        flips.append(f)
        scores.append(float(best))
        alive[winner] = False

    final_l2, final_l1 = _final_metrics(g, tracker.graph, lam0, cfg.k)
    return AttackResult(flips, scores, tracker.restarts, final_l2, final_l1, exhausted)


def run_stack(g: Graph, cfg: AttackConfig) -> AttackResult:
    """Greedy spectral attack with error-triggered exact recomputes."""
    return _run_greedy(g, cfg, restart=True)


def run_stack_no_restart(g: Graph, cfg: AttackConfig) -> AttackResult:
    """Ablation: same greedy loop but the Gram-error trigger is disabled.

    The zero-column recompute is kept — without it the update is undefined.
    """
    return _run_greedy(g, cfg, restart=False)


def run_stack_independent(g: Graph, cfg: AttackConfig) -> AttackResult:
    """Ablation: score all candidates once on the clean graph and take the
    top budget_delta by descending score; no incremental updates at all."""
    cfg.validate(g)
    es = generalized_eigh(g)
    lam0 = es.lambdas.copy()
    cands = sample_candidates(g, cfg.candidate_size, cfg.seed)
    cp = np.array([c.p for c in cands], dtype=np.intp)
    cq = np.array([c.q for c in cands], dtype=np.intp)
    cd = np.array([float(c.delta) for c in cands])
    s = _sanitize_scores(_score_batch(es, _power_root(lam0, cfg.k), cp, cq, cd, cfg.k))
    order = np.lexsort((cq, cp, -s))

    g_cur = g
    flips: list[EdgeFlip] = []
    scores: list[float] = []
    for idx in order:
        if len(flips) == cfg.budget_delta:
            break
        if s[idx] == -np.inf:
            break  # only unusable candidates remain
        f = cands[idx]
        g_cur = flip(g_cur, f)
        flips.append(f)
        scores.append(float(s[idx]))
    final_l2, final_l1 = _final_metrics(g, g_cur, lam0, cfg.k)
    return AttackResult(
        flips, scores, 0, final_l2, final_l1, exhausted=len(flips) < cfg.budget_delta
    )


_CENTRALITY_FN = {
    "deg": degree_centrality,
    "betw": betweenness_centrality,
    "eigen": eigenvector_centrality,
}


def run_baseline(g: Graph, cfg: AttackConfig, strategy: str) -> AttackResult:
    """Heuristic attackers over the same sampled candidate pool.

    random picks uniformly; deg/betw/eigen rank pairs by descending sum of
    endpoint centralities computed once on the original graph; the small_*
    variants rank ascending. Ties break to the lexicographically smallest
    pair.
    """
    if strategy not in BASELINE_STRATEGIES:
        raise ValueError(f"unknown baseline strategy {strategy!r}")
    cfg.validate(g)
    lam0 = generalized_eigh(g).lambdas
    cands = sample_candidates(g, cfg.candidate_size, cfg.seed)

    scores: list[float]
    if strategy == "random":
        rng = np.random.default_rng([cfg.seed, 1])
        pick = rng.choice(len(cands), size=min(cfg.budget_delta, len(cands)), replace=False)
        chosen = [cands[i] for i in pick]
        scores = []
    else:
        centrality = _CENTRALITY_FN[strategy.removeprefix("small_")](g)
        cp = np.array([c.p for c in cands], dtype=np.intp)
        cq = np.array([c.q for c in cands], dtype=np.intp)
        vals = centrality[cp] + centrality[cq]
        key = vals if strategy.startswith("small_") else -vals
        order = np.lexsort((cq, cp, key))[: cfg.budget_delta]
        chosen = [cands[i] for i in order]
        scores = [float(vals[i]) for i in order]

    g_cur = g
    for f in chosen:
        g_cur = flip(g_cur, f)
    final_l2, final_l1 = _final_metrics(g, g_cur, lam0, cfg.k)
    return AttackResult(
        list(chosen),
        scores,
        0,
        final_l2,
        final_l1,
        exhausted=len(chosen) < cfg.budget_delta,
    )


def _surrogate_margin(g: Graph, spec: SurrogateSpec) -> float:
    s = filter_matrix(g, 0.5)
    h = spec.features
    for _ in range(spec.k):
        h = s @ h
    row = h[spec.target_node] @ spec.weights
    rivals = np.delete(row, spec.base_class)
    return float(rivals.max() - row[spec.base_class])


def run_targeted_ext(g: Graph, spec: SurrogateSpec, cfg: AttackConfig) -> AttackResult:
    """Gray-box targeted attack: greedily widen the surrogate's wrong-class
    margin at one node, regularized by gamma times the spectral damage bound.

    The margin is evaluated by exact propagation on each candidate's flipped
    graph (candidate sets are small in targeted mode), and the eigensystem is
    recomputed exactly after each applied flip. scores records the damage
    bound of each chosen flip at selection time.
    """
    cfg.validate(g)
    spec.validate(g)
    es = generalized_eigh(g)
    lam0 = es.lambdas.copy()
    cands = sample_candidates(g, cfg.candidate_size, cfg.seed)
    # iterate in (p, q) order so a strict argmax keeps the lexicographically
    # smallest pair on ties
    by_pair = sorted(range(len(cands)), key=lambda i: (cands[i].p, cands[i].q))
    alive = set(by_pair)

    g_cur = g
    es_cur = es
    flips: list[EdgeFlip] = []
    scores: list[float] = []
    exhausted = False
    for _ in range(cfg.budget_delta):
        best_obj = -np.inf
        best_idx = -1
        best_l2 = 0.0
        for idx in by_pair:
            if idx not in alive:
                continue
            f = cands[idx]
            l2a = score_candidate(es_cur, lam0, f, cfg.k)
            obj = _surrogate_margin(flip(g_cur, f), spec) + spec.gamma * l2a
            if np.isfinite(obj) and obj > best_obj:
                best_obj, best_idx, best_l2 = obj, idx, l2a
        if best_idx < 0:
            exhausted = True
            break
        f = cands[best_idx]
        g_cur = flip(g_cur, f)
        es_cur = generalized_eigh(g_cur)
        flips.append(f)
        scores.append(best_l2)
        alive.discard(best_idx)

    final_l2, final_l1 = _final_metrics(g, g_cur, lam0, cfg.k)
    return AttackResult(flips, scores, 0, final_l2, final_l1, exhausted)
