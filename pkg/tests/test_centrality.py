"""Centralities against independent oracles (networkx and dense algebra)."""

import networkx as nx
import numpy as np
import pytest

import helpers
from spectack.centrality import (
    betweenness_centrality,
    degree_centrality,
    eigenvector_centrality,
)
from spectack.generators import gen_erdos_renyi


def to_networkx(g):
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from(g.edge_list())
    return nxg


class TestDegree:
    def test_star_hub_dominates(self):
        c = degree_centrality(helpers.star_graph(6))
        assert c[0] == 5.0
        assert np.array_equal(c[1:], np.ones(5))

    def test_counts_exclude_self_loop(self):
        c = degree_centrality(helpers.path_graph(3))
        assert c.tolist() == [1.0, 2.0, 1.0]


class TestEigenvector:
    def test_matches_dense_principal_eigenvector(self):
        for seed in range(4):
            g = gen_erdos_renyi(40, 0.15, seed)
            c = eigenvector_centrality(g)
            a = g.adjacency_matrix()  # unit diagonal = the (I + A) iteration map
            vals, vecs = np.linalg.eigh(a)
            lead = np.abs(vecs[:, -1])
            assert np.allclose(c, lead, atol=1e-7)

    def test_unit_norm_non_negative(self):
        c = eigenvector_centrality(helpers.complete_graph(7))
        assert np.linalg.norm(c) == pytest.approx(1.0)
        assert (c >= 0).all()

    def test_converges_on_bipartite_graph(self):
        # a plain power iteration oscillates here; the shifted one must not
        g = helpers.star_graph(10)
        c = eigenvector_centrality(g)
        assert c[0] > c[1] > 0


class TestBetweenness:
    def test_path_center_hand_value(self):
        # in a 3-path only the middle node lies on a shortest path: (0,2)
        assert betweenness_centrality(helpers.path_graph(3)).tolist() == [0.0, 1.0, 0.0]

    def test_star_hub_hand_value(self):
        # hub sits on all C(5,2) leaf pairs
        c = betweenness_centrality(helpers.star_graph(6))
        assert c[0] == 10.0
        assert np.array_equal(c[1:], np.zeros(5))

    def test_complete_graph_all_zero(self):
        assert np.array_equal(betweenness_centrality(helpers.complete_graph(5)), np.zeros(5))

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_networkx_on_random_graphs(self, seed):
        g = gen_erdos_renyi(30, 0.15, seed)
        ours = betweenness_centrality(g)
        theirs = nx.betweenness_centrality(to_networkx(g), normalized=False)
        assert np.allclose(ours, [theirs[u] for u in range(g.n)], atol=1e-9)

    def test_handles_disconnected_graphs(self):
        g = helpers.path_graph(7)
        from spectack.graph import EdgeFlip, flip

        g = flip(g, EdgeFlip(3, 4, -1))  # two components
        ours = betweenness_centrality(g)
        theirs = nx.betweenness_centrality(to_networkx(g), normalized=False)
        assert np.allclose(ours, [theirs[u] for u in range(g.n)], atol=1e-9)
