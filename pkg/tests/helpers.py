"""Shared test fixtures: tiny graph builders and hypothesis strategies."""

from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from spectack.graph import EdgeFlip, Graph, from_edge_list


def path_graph(n: int) -> Graph:
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return from_edge_list(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def star_graph(n: int) -> Graph:
    """Node 0 is the hub."""
    return from_edge_list(n, [(0, v) for v in range(1, n)])


def all_pairs(n: int) -> list[tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


@st.composite
def graphs(draw, min_n: int = 2, max_n: int = 12):
    """Arbitrary small graphs, including empty and complete ones."""
    n = draw(st.integers(min_n, max_n))
    pairs = all_pairs(n)
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return from_edge_list(n, chosen)


@st.composite
def graphs_with_flip(draw, min_n: int = 2, max_n: int = 12):
    """A graph plus one valid flip on it."""
    g = draw(graphs(min_n, max_n))
    p, q = draw(st.sampled_from(all_pairs(g.n)))
    return g, EdgeFlip(p, q, -1 if g.has_edge(p, q) else 1)


def valid_flips(g: Graph) -> list[EdgeFlip]:
    """Every possible flip on g, in (p, q) order."""
    return [
        EdgeFlip(p, q, -1 if g.has_edge(p, q) else 1) for p, q in all_pairs(g.n)
    ]


def apply_flips(g: Graph, flips) -> Graph:
    from spectack.graph import flip

    for f in flips:
        g = flip(g, f)
    return g


def degree_sorted_spectrum(g: Graph) -> np.ndarray:
    """Independent dense oracle for the filter spectrum: eigenvalues of
    D^(-1/2) A D^(-1/2), descending."""
    a = g.adjacency_matrix()
    d = g.degrees
    s = a / np.sqrt(np.outer(d, d))
    return np.linalg.eigvalsh(s)[::-1]
