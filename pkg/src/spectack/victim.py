"""Query-free victims and downstream evaluation.

Two deterministic desk-scale victims measure how much a perturbed graph
hurts node classification: diffusion-based label propagation and a linear
model trained on symmetric-filter-propagated features. Both are closed-form
or fixed-schedule, so an attack can be scored without ever querying a model
during the attack itself.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .errors import ConvergenceError
from .graph import Graph, filter_matrix

__all__ = [
    "LabeledSplit",
    "make_split",
    "label_propagation",
    "train_linear_surrogate",
    "surrogate_predict",
    "macro_f1",
    "macro_precision",
    "macro_recall",
    "pearson",
    "spearman",
    "EvalReport",
    "evaluate_attack",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LabeledSplit:
    """Disjoint train/val/test node index sets."""

    train: np.ndarray
    val: np.ndarray
    test: np.ndarray

    def validate(self, n: int, labels: np.ndarray | None = None) -> None:
        parts = {"train": self.train, "val": self.val, "test": self.test}
        seen: set[int] = set()
        for name, part in parts.items():
            arr = np.asarray(part)
            if arr.ndim != 1:
                raise ValueError(f"{name} indices must be 1-D")
            if arr.size and (arr.min() < 0 or arr.max() >= n):
                raise ValueError(f"{name} indices out of range for n={n}")
            as_set = set(int(i) for i in arr)
            if len(as_set) != arr.size:
                raise ValueError(f"{name} indices contain duplicates")
            if seen & as_set:
                raise ValueError("split parts overlap")
            seen |= as_set
        if self.train.size == 0:
            raise ValueError("train set is empty")
        if labels is not None:
            present = set(int(c) for c in np.asarray(labels)[self.train])
            missing = set(int(c) for c in np.unique(labels)) - present
            if missing:
                logger.warning("train split is missing classes %s", sorted(missing))


def make_split(
    n: int, seed: int, ratios: tuple[float, float, float] = (0.1, 0.1, 0.8)
) -> LabeledSplit:
    """Seeded random split of range(n) into train/val/test by the given
    fractions (boundaries floor; the test part absorbs the remainder)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if len(ratios) != 3 or any(r < 0 for r in ratios) or not np.isclose(sum(ratios), 1.0):
        raise ValueError(f"ratios must be three non-negative values summing to 1, got {ratios}")
    perm = np.random.default_rng(seed).permutation(n)
    n_train = int(n * ratios[0])
    n_val = int(n * ratios[1])
    return LabeledSplit(
        train=np.sort(perm[:n_train]),
        val=np.sort(perm[n_train : n_train + n_val]),
        test=np.sort(perm[n_train + n_val :]),
    )


def label_propagation(
    g: Graph,
    labels: np.ndarray,
    split: LabeledSplit,
    tol: float = 1e-6,
    max_iter: int = 1000,
) -> np.ndarray:
    """Diffuse one-hot train labels over the row-stochastic walk matrix.

    Train rows are clamped to their one-hot labels after every sweep;
    unlabeled rows start uniform so every row stays a distribution
    throughout. Converges when the largest entry change drops below tol;
    raises ConvergenceError otherwise. Returns argmax predictions (ties to
    the lowest class index).
    """
    labels = np.asarray(labels, dtype=int)
    if labels.shape != (g.n,):
        raise ValueError(f"labels must have shape ({g.n},), got {labels.shape}")
    split.validate(g.n, labels)
    n_classes = int(labels.max()) + 1
    if n_classes < 2:
        raise ValueError("label propagation needs at least two classes")

    walk = filter_matrix(g, alpha=1.0)  # rows sum to one
    f = np.full((g.n, n_classes), 1.0 / n_classes)
    f[split.train] = 0.0
    f[split.train, labels[split.train]] = 1.0
    clamp = f[split.train].copy()

    for _ in range(max_iter):
        nxt = walk @ f
        nxt[split.train] = clamp
        delta = np.abs(nxt - f).max()
        f = nxt
        if delta < tol:
            return np.argmax(f, axis=1)
    raise ConvergenceError(
        f"label propagation did not converge within {max_iter} sweeps (tol={tol})"
    )


def _propagated_features(g: Graph, features: np.ndarray, k: int) -> np.ndarray:
    if features.ndim != 2 or features.shape[0] != g.n:
        raise ValueError(f"features must be (n, F) with n={g.n}, got {features.shape}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    s_sym = filter_matrix(g, alpha=0.5)
    h = features
    for _ in range(k):
        h = s_sym @ h
    return h


def train_linear_surrogate(
    g: Graph,
    features: np.ndarray,
    labels: np.ndarray,
    split: LabeledSplit,
    k: int = 2,
    lr: float = 0.1,
    epochs: int = 500,
) -> np.ndarray:
    """Weights of a linear classifier on k-step propagated features.

    Features are propagated once (the filter is fixed), then a zero-
    initialized weight matrix is fit by full-batch gradient descent on
    softmax cross-entropy over the train rows. Fixed schedule, no early
    stopping: the whole procedure is deterministic.
    """
    labels = np.asarray(labels, dtype=int)
    split.validate(g.n, labels)
    if split.train.size == 0:
        raise ValueError("cannot train on an empty split")
    train_labels = labels[split.train]
    if np.unique(train_labels).size < 2:
        raise ValueError("train split must contain at least two classes")
    n_classes = int(labels.max()) + 1

    h = _propagated_features(g, np.asarray(features, dtype=float), k)[split.train]
    y = np.zeros((split.train.size, n_classes))
    y[np.arange(split.train.size), train_labels] = 1.0

    w = np.zeros((h.shape[1], n_classes))
    for _ in range(epochs):
        logits = h @ w
        logits -= logits.max(axis=1, keepdims=True)
        expl = np.exp(logits)
        probs = expl / expl.sum(axis=1, keepdims=True)
        grad = h.T @ (probs - y) / split.train.size
        w -= lr * grad
    return w


def surrogate_predict(
    g: Graph, features: np.ndarray, weights: np.ndarray, k: int = 2
) -> np.ndarray:
    """Argmax class per node from k-step propagated features times weights."""
    h = _propagated_features(g, np.asarray(features, dtype=float), k)
    return np.argmax(h @ weights, axis=1)


# -- metrics -------------------------------------------------------------------


def _per_class_counts(
    truth: np.ndarray, pred: np.ndarray, n_classes: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    truth = np.asarray(truth, dtype=int)
    pred = np.asarray(pred, dtype=int)
    if truth.shape != pred.shape or truth.ndim != 1:
        raise ValueError("truth and pred must be 1-D arrays of equal length")
    if n_classes < 1:
        raise ValueError("n_classes must be >= 1")
    tp = np.zeros(n_classes)
    fp = np.zeros(n_classes)
    fn = np.zeros(n_classes)
    for c in range(n_classes):
        tp[c] = np.sum((pred == c) & (truth == c))
        fp[c] = np.sum((pred == c) & (truth != c))
        fn[c] = np.sum((pred != c) & (truth == c))
    return tp, fp, fn


def _safe_div(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.zeros_like(num, dtype=float)
    np.divide(num, den, out=out, where=den > 0)
    return out


def macro_precision(truth: np.ndarray, pred: np.ndarray, n_classes: int) -> float:
    tp, fp, _ = _per_class_counts(truth, pred, n_classes)
    return float(np.mean(_safe_div(tp, tp + fp)))


def macro_recall(truth: np.ndarray, pred: np.ndarray, n_classes: int) -> float:
    tp, _, fn = _per_class_counts(truth, pred, n_classes)
    return float(np.mean(_safe_div(tp, tp + fn)))


def macro_f1(truth: np.ndarray, pred: np.ndarray, n_classes: int) -> float:
    """Unweighted mean of per-class F1; classes with a zero denominator
    contribute zero rather than NaN."""
    tp, fp, fn = _per_class_counts(truth, pred, n_classes)
    prec = _safe_div(tp, tp + fp)
    rec = _safe_div(tp, tp + fn)
    return float(np.mean(_safe_div(2 * prec * rec, prec + rec)))


def pearson(x: np.ndarray, y: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size < 2:
        raise ValueError("pearson needs two equal-length 1-D arrays with >= 2 points")
    xc = x - x.mean()
    yc = y - y.mean()
    denom = np.sqrt(np.sum(xc * xc) * np.sum(yc * yc))
    if denom == 0:
        raise ValueError("pearson is undefined for constant input")
    return float(np.sum(xc * yc) / denom)


def spearman(x: np.ndarray, y: np.ndarray) -> float:
    """Pearson correlation of average-tie ranks."""
    return pearson(rankdata(x), rankdata(y))


# -- end-to-end evaluation ------------------------------------------------------


@dataclass
class EvalReport:
    """Mean/std accuracy metrics of one victim on clean vs perturbed graphs.

    Drops are clean minus perturbed, as fractions (multiply by 100 for
    percentage points). Per-seed rows are kept for inspection.
    """

    victim: str
    seeds: list[int]
    clean_f1: float
    clean_f1_std: float
    perturbed_f1: float
    perturbed_f1_std: float
    f1_drop: float
    clean_precision: float
    perturbed_precision: float
    precision_drop: float
    clean_recall: float
    perturbed_recall: float
    recall_drop: float
    per_seed: list[dict] = field(default_factory=list)


def _victim_predictions(
    victim: str,
    g: Graph,
    labels: np.ndarray,
    split: LabeledSplit,
    features: np.ndarray | None,
    k: int,
) -> np.ndarray:
    if victim == "labelprop":
        return label_propagation(g, labels, split)
    if victim == "surrogate":
        if features is None:
            raise ValueError("the surrogate victim requires node features")
        w = train_linear_surrogate(g, features, labels, split, k=k)
        return surrogate_predict(g, features, w, k=k)
    raise ValueError(f"unknown victim {victim!r} (expected 'labelprop' or 'surrogate')")


def evaluate_attack(
    g: Graph,
    g_pert: Graph,
    victim: str,
    labels: np.ndarray,
    seeds: list[int],
    features: np.ndarray | None = None,
    k: int = 2,
    ratios: tuple[float, float, float] = (0.1, 0.1, 0.8),
) -> EvalReport:
    """Train/evaluate the victim on clean and perturbed graphs over one
    fresh split per seed; report mean/std metrics on test nodes and the
    clean-minus-perturbed drops.

    Both victims are deterministic given a split, so the seeds drive split
    generation only.
    """
    if g.n != g_pert.n:
        raise ValueError("clean and perturbed graphs must have the same node count")
    labels = np.asarray(labels, dtype=int)
    if labels.shape != (g.n,):
        raise ValueError(f"labels must have shape ({g.n},), got {labels.shape}")
    if not seeds:
        raise ValueError("need at least one seed")
    n_classes = int(labels.max()) + 1

    rows: list[dict] = []
    for seed in seeds:
        split = make_split(g.n, seed, ratios)
        row: dict = {"seed": int(seed)}
        for tag, graph in (("clean", g), ("perturbed", g_pert)):
            pred = _victim_predictions(victim, graph, labels, split, features, k)
            truth = labels[split.test]
            test_pred = pred[split.test]
            row[f"{tag}_f1"] = macro_f1(truth, test_pred, n_classes)
            row[f"{tag}_precision"] = macro_precision(truth, test_pred, n_classes)
            row[f"{tag}_recall"] = macro_recall(truth, test_pred, n_classes)
        rows.append(row)

    def _stats(key: str) -> tuple[float, float]:
        vals = np.array([r[key] for r in rows])
        return float(vals.mean()), float(vals.std())

    clean_f1, clean_f1_std = _stats("clean_f1")
    pert_f1, pert_f1_std = _stats("perturbed_f1")
    clean_p, _ = _stats("clean_precision")
    pert_p, _ = _stats("perturbed_precision")
    clean_r, _ = _stats("clean_recall")
    pert_r, _ = _stats("perturbed_recall")
    return EvalReport(
        victim=victim,
        seeds=[int(s) for s in seeds],
        clean_f1=clean_f1,
        clean_f1_std=clean_f1_std,
        perturbed_f1=pert_f1,
        perturbed_f1_std=pert_f1_std,
        f1_drop=clean_f1 - pert_f1,
        clean_precision=clean_p,
        perturbed_precision=pert_p,
        precision_drop=clean_p - pert_p,
        clean_recall=clean_r,
        perturbed_recall=pert_r,
        recall_drop=clean_r - pert_r,
        per_seed=rows,
    )
