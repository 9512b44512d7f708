"""Spectral edge-flip attacks on graph filters.

A toolkit for adversarially perturbing undirected graphs under an edge-flip
budget: a generic degree-normalized filter, incremental first-order
eigensolution tracking with error-triggered exact recomputes, a greedy
black-box attacker with ablations and heuristic baselines, query-free
victims for damage measurement, and a deterministic CLI harness.
"""

from .attack import (
    AttackConfig,
    AttackResult,
    SurrogateSpec,
    run_baseline,
    run_stack,
    run_stack_independent,
    run_stack_no_restart,
    run_targeted_ext,
    sample_candidates,
    score_candidate,
)
from .errors import (
    ConvergenceError,
    DegenerateSpectrumError,
    GraphFormatError,
    RestartRequired,
)
from .generators import (
    gen_barabasi_albert,
    gen_erdos_renyi,
    gen_planted_partition,
    gen_powerlaw_cluster,
    gen_watts_strogatz,
)
from .graph import EdgeFlip, Graph, filter_matrix, flip
from .graph_io import load_edge_list, save_edge_list
from .spectral import (
    EigenSystem,
    EigenTracker,
    approx_eigenvalues_flip,
    generalized_eigh,
    l1_objective,
    l2_lower_bound,
    ortho_error,
)
from .victim import (
    EvalReport,
    LabeledSplit,
    evaluate_attack,
    label_propagation,
    macro_f1,
    make_split,
    train_linear_surrogate,
)

__version__ = "0.1.0"

__all__ = [
    "AttackConfig",
    "AttackResult",
    "SurrogateSpec",
    "run_baseline",
    "run_stack",
    "run_stack_independent",
    "run_stack_no_restart",
    "run_targeted_ext",
    "sample_candidates",
    "score_candidate",
    "ConvergenceError",
    "DegenerateSpectrumError",
    "GraphFormatError",
    "RestartRequired",
    "gen_barabasi_albert",
    "gen_erdos_renyi",
    "gen_planted_partition",
    "gen_powerlaw_cluster",
    "gen_watts_strogatz",
    "EdgeFlip",
    "Graph",
    "filter_matrix",
    "flip",
    "load_edge_list",
    "save_edge_list",
    "EigenSystem",
    "EigenTracker",
    "approx_eigenvalues_flip",
    "generalized_eigh",
    "l1_objective",
    "l2_lower_bound",
    "ortho_error",
    "EvalReport",
    "LabeledSplit",
    "evaluate_attack",
    "label_propagation",
    "macro_f1",
    "make_split",
    "train_linear_surrogate",
    "__version__",
]
