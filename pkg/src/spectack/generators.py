"""Seeded random graph generators.

All generators are deterministic per seed (same seed => identical edge set)
and return Graph values; planted_partition also returns block labels.
"""

from __future__ import annotations

import numpy as np

from .graph import Graph, from_edge_list

__all__ = [
    "gen_erdos_renyi",
    "gen_barabasi_albert",
    "gen_watts_strogatz",
    "gen_powerlaw_cluster",
    "gen_planted_partition",
]


def _check_prob(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")


def gen_erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p): every off-diagonal pair is an edge independently with prob p."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    _check_prob("p", p)
    rng = np.random.default_rng(seed)
    iu, iv = np.triu_indices(n, k=1)
    mask = rng.random(iu.shape[0]) < p
    return from_edge_list(n, zip(iu[mask].tolist(), iv[mask].tolist()))


def _distinct_choices(pool: list[int], m: int, rng: np.random.Generator) -> set:
    """m distinct values drawn from a (multiplicity-weighted) pool."""
    chosen: set = set()
    while len(chosen) < m:
        chosen.add(pool[int(rng.integers(len(pool)))])
    return chosen


def gen_barabasi_albert(n: int, m: int, seed: int) -> Graph:
    """Preferential attachment starting from m isolated seed nodes.

    Every new node attaches m edges, so the result has exactly (n-m)*m edges.
    """
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < n, got m={m}, n={n}")
    rng = np.random.default_rng(seed)
    edges: list[tuple[int, int]] = []
    targets = list(range(m))
    repeated: list[int] = []  # nodes repeated once per incident edge end
    for source in range(m, n):
        edges.extend((source, t) for t in targets)
        repeated.extend(targets)
        repeated.extend([source] * m)
        if source + 1 < n:
            targets = sorted(_distinct_choices(repeated, m, rng))
    return from_edge_list(n, edges)


def gen_watts_strogatz(n: int, ring_k: int, p_rewire: float, seed: int) -> Graph:
    """Ring lattice over ring_k nearest neighbours with seeded rewiring."""
    if ring_k % 2 != 0:
        raise ValueError(f"ring_k must be even, got {ring_k}")
    if not 0 < ring_k < n:
        raise ValueError(f"need 0 < ring_k < n, got ring_k={ring_k}, n={n}")
    _check_prob("p_rewire", p_rewire)
    rng = np.random.default_rng(seed)
    adj: list[set] = [set() for _ in range(n)]

    def _add(u: int, v: int) -> None:
        adj[u].add(v)
        adj[v].add(u)

    for j in range(1, ring_k // 2 + 1):
        for u in range(n):
            _add(u, (u + j) % n)
    for j in range(1, ring_k // 2 + 1):
        for u in range(n):
            if rng.random() >= p_rewire:
                continue
            v = (u + j) % n
            if len(adj[u]) >= n - 1:
                continue  # saturated node: nowhere left to rewire
            w = int(rng.integers(n))
            while w == u or w in adj[u]:
                w = int(rng.integers(n))
            adj[u].discard(v)
            adj[v].discard(u)
            _add(u, w)
    return from_edge_list(n, ((u, v) for u in range(n) for v in adj[u] if u < v))


def gen_powerlaw_cluster(n: int, m: int, p_triangle: float, seed: int) -> Graph:
    """Growing preferential-attachment graph with triad-formation steps.

    Like the preferential-attachment generator, but after each preferential
    link the next link closes a triangle with probability p_triangle (falling
    back to preferential attachment when no triangle can be closed). Every
    new node still contributes exactly m edges.
    """
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < n, got m={m}, n={n}")
    _check_prob("p_triangle", p_triangle)
    rng = np.random.default_rng(seed)
    adj: list[set] = [set() for _ in range(n)]
    repeated: list[int] = list(range(m))

    def _add(u: int, v: int) -> None:
        adj[u].add(v)
        adj[v].add(u)
        repeated.append(v)

    def _next_target(source: int, possible: list[int]) -> int:
        # Triangle steps may have already linked source to a queued target,
        # so skip (or redraw past) anything adjacent to keep each new node
        # contributing exactly m edges.
        while True:
            cand = possible.pop() if possible else repeated[int(rng.integers(len(repeated)))]
            if cand != source and cand not in adj[source]:
                return cand

    for source in range(m, n):
        possible = sorted(_distinct_choices(repeated, m, rng))
        rng.shuffle(possible)
        target = possible.pop()
        _add(source, target)
        count = 1
        while count < m:
            if rng.random() < p_triangle:
                hood = sorted(adj[target] - adj[source] - {source})
                if hood:
                    nbr = hood[int(rng.integers(len(hood)))]
                    _add(source, nbr)
                    count += 1
                    continue
            target = _next_target(source, possible)
            _add(source, target)
            count += 1
        repeated.extend([source] * m)
    return from_edge_list(n, ((u, v) for u in range(n) for v in adj[u] if u < v))


def gen_planted_partition(
    n: int, n_blocks: int, p_in: float, p_out: float, seed: int
) -> tuple[Graph, np.ndarray]:
    """Equal-size planted blocks: within-block prob p_in > cross-block p_out.

    Returns (graph, labels) where labels[i] is the block id of node i.
    """
    if n_blocks < 1 or n % n_blocks != 0:
        raise ValueError(f"n={n} must be divisible by n_blocks={n_blocks}")
    _check_prob("p_in", p_in)
    _check_prob("p_out", p_out)
    if not p_in > p_out:
        raise ValueError(f"need p_in > p_out, got p_in={p_in}, p_out={p_out}")
    rng = np.random.default_rng(seed)
    labels = np.arange(n) // (n // n_blocks)
    iu, iv = np.triu_indices(n, k=1)
    prob = np.where(labels[iu] == labels[iv], p_in, p_out)
    mask = rng.random(iu.shape[0]) < prob
    g = from_edge_list(n, zip(iu[mask].tolist(), iv[mask].tolist()))
    return g, labels
