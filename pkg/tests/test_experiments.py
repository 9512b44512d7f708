"""Approximation-quality and objective-correlation experiment drivers."""

import numpy as np
import pytest

from spectack.experiments import (
    GENERATOR_PRESETS,
    approx_quality,
    correlation_samples,
    make_graph,
)
from spectack.generators import gen_erdos_renyi
from spectack.spectral import generalized_eigh


class TestPresetsAndDispatch:
    def test_presets_cover_all_four_kinds(self):
        assert set(GENERATOR_PRESETS) == {"er", "ba", "ws", "plc"}
        for params in GENERATOR_PRESETS.values():
            assert params["n"] == 1000

    @pytest.mark.parametrize("kind", ["er", "ba", "ws", "plc"])
    def test_presets_hit_average_degree_ten(self, kind):
        g = make_graph(kind, seed=0, **GENERATOR_PRESETS[kind])
        avg = 2 * g.num_edges / g.n
        assert 8.0 <= avg <= 12.0

    def test_dispatch_is_deterministic(self):
        a = make_graph("er", seed=5, n=50, p=0.1)
        b = make_graph("er", seed=5, n=50, p=0.1)
        assert a == b

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError, match="kind"):
            make_graph("grid", seed=0, n=10)


class TestApproxQuality:
    def test_zero_flips_reduces_to_exact_agreement(self):
        res = approx_quality("er", params={"n": 40, "p": 0.2}, n_flips=0, repeats=3)
        assert res.mae_with_restart <= 1e-10
        assert res.mae_without_restart <= 1e-10
        assert res.restarts_with == 0 and res.restarts_without == 0

    def test_arrays_are_parallel_and_indexed_per_repeat(self):
        res = approx_quality("er", params={"n": 25, "p": 0.25}, n_flips=3, repeats=4)
        assert (
            res.eigen_index.shape
            == res.true_value.shape
            == res.approx_with_restart.shape
            == res.approx_without_restart.shape
            == (4 * 25,)
        )
        assert res.eigen_index.tolist() == list(range(25)) * 4
        assert res.kind == "er" and res.repeats == 4 and res.n_flips == 3

    def test_restart_tracking_is_at_least_as_accurate(self):
        res = approx_quality(
            "er", params={"n": 60, "p": 0.15}, n_flips=8, repeats=10, tau=0.01
        )
        assert res.mae_with_restart <= res.mae_without_restart + 1e-12
        assert res.restarts_with >= res.restarts_without
        assert res.pearson_with_restart >= 0.99

    def test_deterministic_in_seed(self):
        kw = dict(params={"n": 30, "p": 0.2}, n_flips=4, repeats=3, seed=11)
        a = approx_quality("er", **kw)
        b = approx_quality("er", **kw)
        assert np.array_equal(a.true_value, b.true_value)
        assert np.array_equal(a.approx_with_restart, b.approx_with_restart)
        assert a.mae_without_restart == b.mae_without_restart

    def test_rejects_bad_counts(self):
        with pytest.raises(ValueError, match="repeats"):
            approx_quality("er", params={"n": 10, "p": 0.3}, repeats=0)
        with pytest.raises(ValueError, match="n_flips"):
            approx_quality("er", params={"n": 10, "p": 0.3}, n_flips=-1)

    def test_unknown_kind_fails_fast(self):
        with pytest.raises(KeyError):
            approx_quality("grid")


class TestCorrelationSamples:
    def test_statistics_match_recomputed_arrays(self):
        g = gen_erdos_renyi(50, 0.15, seed=6)
        res = correlation_samples(g, n_samples=20, flips_per_sample=2, seed=3)
        assert res.l1_exact.shape == res.l2_approx.shape == (20,)
        assert np.all(res.l1_exact >= 0) and np.all(res.l2_approx >= 0)
        from spectack.victim import pearson, spearman

        assert res.pearson == pytest.approx(pearson(res.l1_exact, res.l2_approx))
        assert res.spearman == pytest.approx(spearman(res.l1_exact, res.l2_approx))

    def test_single_flip_bound_stays_below_exact_objective(self):
        # the damage bound is a lower bound up to first-order error; for one
        # flip on a well-conditioned graph it must not wildly exceed exact
        g = gen_erdos_renyi(60, 0.15, seed=7)
        assert np.min(np.abs(generalized_eigh(g).lambdas)) > 1e-5
        res = correlation_samples(g, n_samples=30, flips_per_sample=1, seed=0)
        assert res.pearson > 0.5

    def test_deterministic_in_seed(self):
        g = gen_erdos_renyi(40, 0.15, seed=8)
        a = correlation_samples(g, n_samples=10, seed=5)
        b = correlation_samples(g, n_samples=10, seed=5)
        assert np.array_equal(a.l1_exact, b.l1_exact)
        assert np.array_equal(a.l2_approx, b.l2_approx)
        assert a.pearson == b.pearson

    def test_rejects_bad_counts(self):
        g = gen_erdos_renyi(20, 0.2, seed=9)
        with pytest.raises(ValueError, match="n_samples"):
            correlation_samples(g, n_samples=2)
        with pytest.raises(ValueError, match="flips_per_sample"):
            correlation_samples(g, n_samples=5, flips_per_sample=0)
