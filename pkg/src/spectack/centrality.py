"""Node centralities used by the heuristic baselines.

Self-loops are excluded throughout: degree counts neighbours only, shortest
paths never use loops, and the eigenvector centrality is the principal
eigenvector of the off-diagonal adjacency.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .errors import ConvergenceError
from .graph import Graph

__all__ = ["degree_centrality", "eigenvector_centrality", "betweenness_centrality"]


def degree_centrality(g: Graph) -> np.ndarray:
    """Raw neighbour counts as floats."""
    return np.array([float(len(g.neighbors(u))) for u in range(g.n)])


def eigenvector_centrality(g: Graph, max_iter: int = 1000, tol: float = 1e-10) -> np.ndarray:
    """Principal eigenvector of the adjacency, unit 2-norm, non-negative.

    Iterates x <- (I + A) x: the shift leaves the eigenvector unchanged but
    prevents the sign oscillation a plain power iteration hits on bipartite
    graphs.
    """
    adj = [sorted(g.neighbors(u)) for u in range(g.n)]
    x = np.full(g.n, 1.0 / np.sqrt(g.n))
    for _ in range(max_iter):
        nxt = x.copy()
        for u, nb in enumerate(adj):
            if nb:
                nxt[u] += x[nb].sum()
        nxt /= np.linalg.norm(nxt)
        if np.max(np.abs(nxt - x)) < tol:
            return nxt
        x = nxt
    raise ConvergenceError(
        f"eigenvector centrality did not converge within {max_iter} iterations"
    )


def betweenness_centrality(g: Graph) -> np.ndarray:
    """Shortest-path betweenness, unordered pair counting, endpoints excluded,
    unnormalized (Brandes' accumulation)."""
    n = g.n
    adj = [sorted(g.neighbors(u)) for u in range(n)]
    bc = np.zeros(n)
    for s in range(n):
        stack: list[int] = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = np.zeros(n)
        sigma[s] = 1.0
        dist = np.full(n, -1)
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = np.zeros(n)
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    return bc / 2.0
