"""Command-line harness: generate graphs, run attackers, evaluate victims,
and reproduce the two analysis studies.

Every command is deterministic given its flags and seeds; JSON reports are
key-sorted (`report_v1`) so identical invocations produce byte-identical
non-timing output. Exit codes: 0 success, 2 validation error, 3 I/O error,
4 numerical failure.
"""

from __future__ import annotations

import csv
import functools
import hashlib
import json
import math
import sys
import time
from pathlib import Path

import click
import numpy as np

from .attack import (
    AttackConfig,
    AttackResult,
    run_baseline,
    run_stack,
    run_stack_independent,
    run_stack_no_restart,
)
from .errors import ConvergenceError, DegenerateSpectrumError, GraphFormatError, RestartRequired
from .experiments import GENERATOR_PRESETS, approx_quality, correlation_samples
from .generators import gen_planted_partition
from .graph import Graph, flip
from .graph_io import (
    edge_list_text,
    load_edge_list,
    load_features_csv,
    load_labels_csv,
    save_edge_list,
    save_labels_csv,
)
from .victim import evaluate_attack

ATTACKERS = (
    "stack",
    "stack-r",
    "stack-r-d",
    "random",
    "deg",
    "betw",
    "eigen",
    "small-deg",
    "small-betw",
    "small-eigen",
)

_NUMERICAL_ERRORS = (
    ConvergenceError,
    DegenerateSpectrumError,
    RestartRequired,
    np.linalg.LinAlgError,
)


def _fail(code: int, err: BaseException) -> None:
    click.echo(f"error: {err}", err=True)
    sys.exit(code)


def _handled(fn):
    """Map exceptions to the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except click.ClickException:
            raise
        except GraphFormatError as err:
            _fail(3, err)
        except OSError as err:
            _fail(3, err)
        except _NUMERICAL_ERRORS as err:
            _fail(4, err)
        except ValueError as err:
            _fail(2, err)

    return wrapper


def _git_blob_sha1(text: str) -> str:
    data = text.encode()
    digest = hashlib.sha1(b"blob %d\x00" % len(data))
    digest.update(data)
    return digest.hexdigest()


def _write_report(path: str, payload: dict, started: float) -> None:
    payload["timing_ms"] = (time.perf_counter() - started) * 1000.0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [x if isinstance(x, (int, str)) else format(float(x), ".17g") for x in row]
            )


def _default_fig(csv_path: str) -> str:
    return str(Path(csv_path).with_suffix(".png"))


@click.group()
def main() -> None:
    """Spectral edge-flip attacks on graph filters."""


# -- generate -------------------------------------------------------------------


@main.group()
def generate() -> None:
    """Write a synthetic graph as an edge-list file."""


def _finish_generate(g: Graph, out_path: str | None, stem: str) -> str:
    path = out_path if out_path else f"{stem}.edges"
    save_edge_list(g, path)
    click.echo(f"wrote {path}: {g.n} nodes, {g.num_edges} edges")
    return path


@generate.command("er")
@click.option("--n", type=int, required=True)
@click.option("--p", type=float, required=True, help="edge probability")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", default=None, help="output path (default derived)")
@_handled
def generate_er(n: int, p: float, seed: int, out_path: str | None) -> None:
    from .generators import gen_erdos_renyi

    _finish_generate(gen_erdos_renyi(n, p, seed), out_path, f"er_n{n}_s{seed}")


@generate.command("ba")
@click.option("--n", type=int, required=True)
@click.option("--m", type=int, required=True, help="edges attached per new node")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", default=None)
@_handled
def generate_ba(n: int, m: int, seed: int, out_path: str | None) -> None:
    from .generators import gen_barabasi_albert

    _finish_generate(gen_barabasi_albert(n, m, seed), out_path, f"ba_n{n}_s{seed}")


@generate.command("ws")
@click.option("--n", type=int, required=True)
@click.option("--ring-k", type=int, required=True, help="ring-lattice neighbors per node")
@click.option("--p", type=float, required=True, help="rewiring probability")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", default=None)
@_handled
def generate_ws(n: int, ring_k: int, p: float, seed: int, out_path: str | None) -> None:
    from .generators import gen_watts_strogatz

    _finish_generate(gen_watts_strogatz(n, ring_k, p, seed), out_path, f"ws_n{n}_s{seed}")


@generate.command("plc")
@click.option("--n", type=int, required=True)
@click.option("--m", type=int, required=True, help="edges attached per new node")
@click.option("--p", type=float, required=True, help="triangle-closing probability")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", default=None)
@_handled
def generate_plc(n: int, m: int, p: float, seed: int, out_path: str | None) -> None:
    from .generators import gen_powerlaw_cluster

    _finish_generate(gen_powerlaw_cluster(n, m, p, seed), out_path, f"plc_n{n}_s{seed}")


@generate.command("pp")
@click.option("--n", type=int, required=True)
@click.option("--blocks", type=int, required=True)
@click.option("--p-in", type=float, required=True, help="within-block edge probability")
@click.option("--p-out", type=float, required=True, help="between-block edge probability")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", default=None)
@click.option("--labels-out", default=None, help="labels CSV path (default derived)")
@_handled
def generate_pp(
    n: int,
    blocks: int,
    p_in: float,
    p_out: float,
    seed: int,
    out_path: str | None,
    labels_out: str | None,
) -> None:
    g, labels = gen_planted_partition(n, blocks, p_in, p_out, seed)
    path = _finish_generate(g, out_path, f"pp_n{n}_s{seed}")
    labels_path = labels_out if labels_out else str(Path(path).with_suffix(".labels.csv"))
    save_labels_csv(labels, labels_path)
    click.echo(f"wrote {labels_path}: {blocks} classes")


# -- attack ---------------------------------------------------------------------


def _run_attacker(name: str, g: Graph, cfg: AttackConfig) -> AttackResult:
    if name == "stack":
        return run_stack(g, cfg)
    if name == "stack-r":
        return run_stack_no_restart(g, cfg)
    if name == "stack-r-d":
        return run_stack_independent(g, cfg)
    return run_baseline(g, cfg, name.replace("-", "_"))


@main.command()
@click.argument("graph_path")
@click.option("--attacker", type=click.Choice(ATTACKERS), default="stack", show_default=True)
@click.option("--budget", type=int, default=None, help="absolute flip budget (overrides --budget-rate)")
@click.option("--budget-rate", type=float, default=0.10, show_default=True, help="budget as a fraction of |E|, ceil-rounded")
@click.option("--k", type=int, default=1, show_default=True, help="filter order of the objective")
@click.option("--tau", type=float, default=0.03, show_default=True, help="Gram-error threshold for exact recomputes")
@click.option("--candidates", "candidate_size", type=int, default=20000, show_default=True, help="sampled candidate pairs (capped at C(n,2))")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--ortho-mode", type=click.Choice(["auto", "exact", "sampled"]), default="auto", show_default=True)
@click.option("--ortho-pairs", type=int, default=4096, show_default=True)
@click.option("--out", "out_path", required=True, help="perturbed edge-list path")
@click.option("--report", "report_path", default=None, help="JSON report path")
@_handled
def attack(
    graph_path: str,
    attacker: str,
    budget: int | None,
    budget_rate: float,
    k: int,
    tau: float,
    candidate_size: int,
    seed: int,
    ortho_mode: str,
    ortho_pairs: int,
    out_path: str,
    report_path: str | None,
) -> None:
    """Run an attacker against GRAPH_PATH and write the perturbed graph."""
    started = time.perf_counter()
    g = load_edge_list(graph_path)
    resolved_budget = budget if budget is not None else math.ceil(budget_rate * g.num_edges)
    capped = min(candidate_size, g.n * (g.n - 1) // 2)
    cfg = AttackConfig(
        budget_delta=resolved_budget,
        k=k,
        tau=tau,
        candidate_size=capped,
        seed=seed,
        ortho_mode=ortho_mode,
        ortho_pairs=ortho_pairs,
    )
    result = _run_attacker(attacker, g, cfg)

    g_pert = g
    for f in result.flips:
        g_pert = flip(g_pert, f)
    save_edge_list(g_pert, out_path)

    click.echo(
        f"{attacker}: {len(result.flips)} flips, {result.restarts} restarts, "
        f"final_l2_exact={result.final_l2_exact:.6g}, final_l1={result.final_l1:.6g}"
        + (" (candidates exhausted)" if result.exhausted else "")
    )
    click.echo(f"wrote {out_path}")
    if report_path:
        payload = {
            "schema": "report_v1",
            "command": "attack",
            "config": {
                "graph": graph_path,
                "out": out_path,
                "attacker": attacker,
                "budget": resolved_budget,
                "budget_rate": budget_rate,
                "k": k,
                "tau": tau,
                "candidate_size": capped,
                "seed": seed,
                "ortho_mode": ortho_mode,
                "ortho_pairs": ortho_pairs,
            },
            "graph_sha1": _git_blob_sha1(edge_list_text(g)),
            "perturbed_sha1": _git_blob_sha1(edge_list_text(g_pert)),
            "attack": {
                "flips": [[f.p, f.q, f.delta] for f in result.flips],
                "scores": [float(s) for s in result.scores],
                "n_flips": len(result.flips),
                "restarts": result.restarts,
                "final_l1": result.final_l1,
                "final_l2_exact": result.final_l2_exact,
                "exhausted": result.exhausted,
            },
        }
        _write_report(report_path, payload, started)
        click.echo(f"wrote {report_path}")


# -- evaluate -------------------------------------------------------------------


@main.command()
@click.argument("clean_path")
@click.argument("perturbed_path")
@click.option("--victim", type=click.Choice(["labelprop", "surrogate"]), required=True)
@click.option("--labels", "labels_path", required=True, help="labels CSV")
@click.option("--features", "features_path", default=None, help="features CSV (surrogate victim)")
@click.option("--seeds", default="0,1,2,3,4,5,6,7,8,9", show_default=True, help="comma-separated split seeds")
@click.option("--k", type=int, default=2, show_default=True, help="propagation depth of the surrogate victim")
@click.option("--report", "report_path", default=None, help="JSON report path")
@_handled
def evaluate(
    clean_path: str,
    perturbed_path: str,
    victim: str,
    labels_path: str,
    features_path: str | None,
    seeds: str,
    k: int,
    report_path: str | None,
) -> None:
    """Compare a victim's accuracy on the clean vs perturbed graph."""
    started = time.perf_counter()
    g = load_edge_list(clean_path)
    g_pert = load_edge_list(perturbed_path)
    labels = load_labels_csv(labels_path)
    features = load_features_csv(features_path) if features_path else None
    seed_list = [int(s) for s in seeds.split(",") if s.strip()]

    report = evaluate_attack(g, g_pert, victim, labels, seed_list, features=features, k=k)

    click.echo(f"victim={victim}  seeds={len(seed_list)}")
    click.echo(
        f"clean      Macro-F1 {report.clean_f1:.4f} ± {report.clean_f1_std:.4f}   "
        f"P {report.clean_precision:.4f}   R {report.clean_recall:.4f}"
    )
    click.echo(
        f"attacked   Macro-F1 {report.perturbed_f1:.4f} ± {report.perturbed_f1_std:.4f}   "
        f"P {report.perturbed_precision:.4f}   R {report.perturbed_recall:.4f}"
    )
    click.echo(
        f"drop (pp)  Macro-F1 {100 * report.f1_drop:+.2f}   "
        f"P {100 * report.precision_drop:+.2f}   R {100 * report.recall_drop:+.2f}"
    )
    if report_path:
        payload = {
            "schema": "report_v1",
            "command": "evaluate",
            "config": {
                "clean": clean_path,
                "perturbed": perturbed_path,
                "victim": victim,
                "labels": labels_path,
                "features": features_path,
                "seeds": report.seeds,
                "k": k,
            },
            "graph_sha1": _git_blob_sha1(edge_list_text(g)),
            "perturbed_sha1": _git_blob_sha1(edge_list_text(g_pert)),
            "eval": {
                "victim": report.victim,
                "clean_f1": report.clean_f1,
                "clean_f1_std": report.clean_f1_std,
                "perturbed_f1": report.perturbed_f1,
                "perturbed_f1_std": report.perturbed_f1_std,
                "f1_drop": report.f1_drop,
                "clean_precision": report.clean_precision,
                "perturbed_precision": report.perturbed_precision,
                "precision_drop": report.precision_drop,
                "clean_recall": report.clean_recall,
                "perturbed_recall": report.perturbed_recall,
                "recall_drop": report.recall_drop,
                "per_seed": report.per_seed,
            },
        }
        _write_report(report_path, payload, started)
        click.echo(f"wrote {report_path}")


# -- analysis experiments ---------------------------------------------------------


@main.command("approx-quality")
@click.option("--kind", type=click.Choice(sorted(GENERATOR_PRESETS)), default="er", show_default=True)
@click.option("--n", type=int, default=None, help="override preset node count")
@click.option("--p", type=float, default=None, help="override ER edge probability")
@click.option("--m", type=int, default=None, help="override BA/PLC attachment count")
@click.option("--ring-k", type=int, default=None, help="override WS ring neighbors")
@click.option("--p-rewire", type=float, default=None, help="override WS rewiring probability")
@click.option("--p-triangle", type=float, default=None, help="override PLC triangle probability")
@click.option("--n-flips", type=int, default=10, show_default=True)
@click.option("--repeats", type=int, default=100, show_default=True)
@click.option("--tau", type=float, default=0.03, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out-csv", required=True)
@click.option("--fig", "fig_path", default=None, help="figure path (default: CSV path with .png)")
@click.option("--report", "report_path", default=None, help="JSON report path")
@_handled
def approx_quality_cmd(
    kind: str,
    n: int | None,
    p: float | None,
    m: int | None,
    ring_k: int | None,
    p_rewire: float | None,
    p_triangle: float | None,
    n_flips: int,
    repeats: int,
    tau: float,
    seed: int,
    out_csv: str,
    fig_path: str | None,
    report_path: str | None,
) -> None:
    """Track eigenvalues through random flips and compare against exact
    solves, with and without error-triggered recomputes."""
    started = time.perf_counter()
    overrides = {
        "n": n,
        "p": p,
        "m": m,
        "ring_k": ring_k,
        "p_rewire": p_rewire,
        "p_triangle": p_triangle,
    }
    given = {key: val for key, val in overrides.items() if val is not None}
    params = dict(GENERATOR_PRESETS[kind])
    stray = sorted(set(given) - set(params))
    if stray:
        raise ValueError(f"options {stray} do not apply to kind {kind!r}")
    params.update(given)

    result = approx_quality(
        kind, params, n_flips=n_flips, repeats=repeats, tau=tau, seed=seed
    )
    _write_csv(
        out_csv,
        ["eigen_index", "true_value", "approx_with_restart", "approx_without_restart"],
        zip(
            (int(i) for i in result.eigen_index),
            result.true_value,
            result.approx_with_restart,
            result.approx_without_restart,
        ),
    )
    fig_file = fig_path if fig_path else _default_fig(out_csv)
    from .plotting import plot_approx_quality

    plot_approx_quality(result, fig_file)

    click.echo(
        f"{kind}: mean |error| with recompute {result.mae_with_restart:.3e} "
        f"(Pearson {result.pearson_with_restart:.4f}), "
        f"without {result.mae_without_restart:.3e} "
        f"(Pearson {result.pearson_without_restart:.4f})"
    )
    click.echo(f"recomputes triggered: {result.restarts_with}")
    click.echo(f"wrote {out_csv} and {fig_file}")
    if report_path:
        payload = {
            "schema": "report_v1",
            "command": "approx-quality",
            "config": {
                "kind": kind,
                "params": params,
                "n_flips": n_flips,
                "repeats": repeats,
                "tau": tau,
                "seed": seed,
                "out_csv": out_csv,
                "fig": fig_file,
            },
            "experiment": {
                "mae_with_restart": result.mae_with_restart,
                "mae_without_restart": result.mae_without_restart,
                "pearson_with_restart": result.pearson_with_restart,
                "pearson_without_restart": result.pearson_without_restart,
                "restarts_with": result.restarts_with,
                "restarts_without": result.restarts_without,
                "rows": int(result.true_value.size),
            },
        }
        _write_report(report_path, payload, started)
        click.echo(f"wrote {report_path}")


@main.command()
@click.argument("graph_path")
@click.option("--samples", "n_samples", type=int, default=200, show_default=True)
@click.option("--flips-per-sample", type=int, default=1, show_default=True)
@click.option("--k", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out-csv", default=None, help="write per-sample values")
@click.option("--fig", "fig_path", default=None, help="figure path (default: CSV path with .png)")
@click.option("--report", "report_path", default=None, help="JSON report path")
@_handled
def correlation(
    graph_path: str,
    n_samples: int,
    flips_per_sample: int,
    k: int,
    seed: int,
    out_csv: str | None,
    fig_path: str | None,
    report_path: str | None,
) -> None:
    """Correlate the exact filter distance with the chained first-order
    damage bound over random flip sets on GRAPH_PATH."""
    started = time.perf_counter()
    g = load_edge_list(graph_path)
    result = correlation_samples(
        g, n_samples, flips_per_sample=flips_per_sample, k=k, seed=seed
    )
    click.echo(f"Pearson {result.pearson:.4f}  Spearman {result.spearman:.4f}")

    fig_file = fig_path
    if out_csv:
        _write_csv(out_csv, ["l1_exact", "l2_approx"], zip(result.l1_exact, result.l2_approx))
        if fig_file is None:
            fig_file = _default_fig(out_csv)
        click.echo(f"wrote {out_csv}")
    if fig_file:
        from .plotting import plot_correlation

        plot_correlation(result, fig_file)
        click.echo(f"wrote {fig_file}")
    if report_path:
        payload = {
            "schema": "report_v1",
            "command": "correlation",
            "config": {
                "graph": graph_path,
                "samples": n_samples,
                "flips_per_sample": flips_per_sample,
                "k": k,
                "seed": seed,
            },
            "graph_sha1": _git_blob_sha1(edge_list_text(g)),
            "experiment": {
                "pearson": result.pearson,
                "spearman": result.spearman,
            },
        }
        _write_report(report_path, payload, started)
        click.echo(f"wrote {report_path}")


if __name__ == "__main__":
    main()
