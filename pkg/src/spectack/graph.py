"""Undirected graph values with implicit self-loops, edge flips, and the
degree-normalized filter family S = D^(-a) A D^(a-1).

Every node carries an implicit self-loop: the adjacency matrix A has a unit
diagonal (never stored in the edge set, never flippable) and the degree of
node i is 1 + number of neighbours, so D is always invertible even when a
node loses its last off-diagonal edge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Graph", "EdgeFlip", "from_edge_list", "flip", "filter_matrix"]


@dataclass(frozen=True)
class EdgeFlip:
    """A single toggle of the unordered off-diagonal pair {p, q}.

    delta is +1 for an insertion, -1 for a deletion. Endpoints are kept in
    canonical p < q order so flips compare and sort deterministically.
    """

    p: int
    q: int
    delta: int

    def __post_init__(self) -> None:
        if self.p == self.q:
            raise ValueError(f"flip may not touch a self-loop: ({self.p}, {self.q})")
        if self.p > self.q:
            raise ValueError(f"flip endpoints must satisfy p < q: ({self.p}, {self.q})")
        if self.delta not in (1, -1):
            raise ValueError(f"flip delta must be +1 or -1, got {self.delta!r}")

    def inverted(self) -> "EdgeFlip":
        return EdgeFlip(self.p, self.q, -self.delta)


class Graph:
    """Immutable undirected, unweighted graph on nodes 0..n-1."""

    __slots__ = ("n", "_adj", "_deg")

    def __init__(self, n: int, adj: tuple[frozenset, ...]):
        # Not validated here: build graphs through from_edge_list / flip /
        # the generators, which guarantee a consistent neighbour structure.
        self.n = n
        self._adj = adj
        self._deg = np.array([1.0 + len(a) for a in adj])

    # -- queries -----------------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def neighbors(self, u: int) -> frozenset:
        return self._adj[u]

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self._adj) // 2

    @property
    def degrees(self) -> np.ndarray:
        """Degree vector d_i = 1 + |neighbours(i)| (unit self-loop included)."""
        return self._deg.copy()

    @property
    def d_min(self) -> float:
        return float(self._deg.min())

    def edge_list(self) -> list[tuple[int, int]]:
        """All edges as sorted (u, v) pairs with u < v, ascending."""
        return sorted((u, v) for u in range(self.n) for v in self._adj[u] if u < v)

    def adjacency_matrix(self) -> np.ndarray:
        """Dense 0/1 adjacency with unit diagonal."""
        a = np.zeros((self.n, self.n))
        for u, nb in enumerate(self._adj):
            if nb:
                a[u, list(nb)] = 1.0
        np.fill_diagonal(a, 1.0)
        return a

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self.n, self._adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.num_edges})"


def from_edge_list(n: int, pairs) -> Graph:
    """Build a Graph from (u, v) pairs; duplicates collapse, order is free."""
    if n < 1:
        raise ValueError(f"graph needs at least one node, got n={n}")
    adj: list[set] = [set() for _ in range(n)]
    for u, v in pairs:
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise ValueError(f"explicit self-loop ({u}, {v}) is not allowed")
        adj[u].add(v)
        adj[v].add(u)
    return Graph(n, tuple(frozenset(a) for a in adj))


def flip(g: Graph, f: EdgeFlip) -> Graph:
    """Apply one edge flip, returning a new graph."""
    if not (0 <= f.p < g.n and 0 <= f.q < g.n):
        raise ValueError(f"flip ({f.p}, {f.q}) out of range for n={g.n}")
    present = g.has_edge(f.p, f.q)
    if f.delta == 1 and present:
        raise ValueError(f"cannot insert existing edge ({f.p}, {f.q})")
    if f.delta == -1 and not present:
        raise ValueError(f"cannot delete missing edge ({f.p}, {f.q})")
    adj = list(g._adj)
    if f.delta == 1:
        adj[f.p] = adj[f.p] | {f.q}
        adj[f.q] = adj[f.q] | {f.p}
    else:
        adj[f.p] = adj[f.p] - {f.q}
        adj[f.q] = adj[f.q] - {f.p}
    return Graph(g.n, tuple(adj))


def filter_matrix(g: Graph, alpha: float) -> np.ndarray:
    """Dense filter S = D^(-alpha) A D^(alpha-1) for alpha in [0, 1].

    alpha = 1/2 gives the symmetric filter, alpha = 1 the random-walk
    (row-stochastic) filter; the spectrum is the same for every alpha.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    a = g.adjacency_matrix()
    d = g._deg
    return (d ** -alpha)[:, None] * a * (d ** (alpha - 1.0))[None, :]
