"""
Tests for the branching random walk and first-passage percolation.
"""

import math

import numpy as np
import pytest

from treecrit.core.exceptions import BudgetExceededError
from treecrit.distributions.families import ExpNegGaussian, PointMass
from treecrit.distributions.steps import NormalStep
from treecrit.models.brw import BrwSpec
from treecrit.services.brw import (
    brw_env,
    enumerate_minima,
    fpp_reach,
    positivity_time,
    simulate_brw,
    speed_estimate,
)
from treecrit.services.catalogue import normal_brw
from treecrit.services.environment import load_brw
from treecrit.services.tree_sim import count_exceedances


@pytest.fixture
def unit_brw(fixtures_dir):
    """Every step is exactly 1."""
    return load_brw(fixtures_dir / "unit_brw.json")


class TestBrwEnv:
    def test_labels_are_exp_minus_step(self, normal01_brw, unit_brw):
        assert brw_env(normal01_brw).entry(1, 2) == ExpNegGaussian(mu=0.0, sigma=1.0)
        assert brw_env(unit_brw).entry(2, 1) == PointMass(value=math.exp(-1.0))


class TestSimulate:
    def test_unit_steps(self, unit_brw):
        run = simulate_brw(unit_brw, 6, seed=0)
        np.testing.assert_allclose(run.mu, np.arange(1, 7), rtol=1e-12)
        # deterministic steps merge to one particle per type
        assert [s.frontier_size for s in run.snapshots] == [2] * 6
        assert run.sound

    def test_unpruned_generation_sizes(self, normal01_brw):
        run = simulate_brw(normal01_brw, 8, seed=1, prune_window=math.inf, frontier_cap=0)
        assert [s.frontier_size for s in run.snapshots] == [2**t for t in range(1, 9)]
        assert not any(s.pruned for s in run.snapshots)

    def test_equal_type_counts_unpruned(self, normal01_brw):
        run = simulate_brw(normal01_brw, 7, seed=2, prune_window=math.inf, frontier_cap=0)
        assert np.bincount(run.types, minlength=3)[1:].tolist() == [64, 64]

    def test_matches_enumeration(self, normal01_brw):
        run = simulate_brw(normal01_brw, 10, seed=3, prune_window=math.inf, frontier_cap=0)
        oracle = enumerate_minima(normal01_brw, 10, seed=3)
        assert oracle.positions.size == 1024
        assert run.snapshots[-1].mu == oracle.mu
        np.testing.assert_array_equal(run.positions, oracle.positions)

    @pytest.mark.parametrize("seed", range(10))
    def test_wide_window_keeps_true_minimum(self, normal01_brw, seed):
        pruned = simulate_brw(normal01_brw, 12, seed=seed, prune_window=40.0)
        full = simulate_brw(normal01_brw, 12, seed=seed, prune_window=math.inf, frontier_cap=0)
        assert pruned.sound
        np.testing.assert_array_equal(pruned.mu, full.mu)

    def test_narrow_window_prunes(self, normal01_brw):
        run = simulate_brw(normal01_brw, 12, seed=4, prune_window=1.0)
        assert any(s.pruned for s in run.snapshots)
        assert run.snapshots[-1].frontier_size < 2**12
        assert np.all(run.positions <= run.snapshots[-1].mu + 1.0)

    def test_cap_clears_soundness(self, normal01_brw):
        run = simulate_brw(normal01_brw, 10, seed=5, prune_window=math.inf, frontier_cap=16)
        assert not run.sound
        assert run.snapshots[-1].frontier_size == 16

    def test_frontier_budget(self, normal01_brw, monkeypatch):
        monkeypatch.setenv("TREECRIT_MAX_FRONTIER", "1000")
        with pytest.raises(BudgetExceededError):
            simulate_brw(normal01_brw, 11, seed=0, prune_window=math.inf, frontier_cap=0)

    def test_frame(self, unit_brw):
        frame = simulate_brw(unit_brw, 3, seed=0).to_frame()
        assert list(frame.columns) == ["generation", "mu_t", "frontier_size", "pruned_flag"]
        assert frame["generation"].tolist() == [1, 2, 3]


class TestSpeed:
    def test_degenerate_returns_exact_speed(self, unit_brw):
        est = speed_estimate(unit_brw, 20, trials=5, seed=0)
        assert est.degenerate
        assert est.x0 == pytest.approx(1.0, abs=1e-12)
        assert est.std_err == 0.0
        np.testing.assert_allclose(est.mu_over_t, 1.0, atol=1e-12)

    def test_gaussian_speed_approaches_x0(self, normal01_brw):
        est = speed_estimate(normal01_brw, 50, trials=10, seed=1, prune_window=6.0)
        assert est.x0 == pytest.approx(-math.sqrt(2 * math.log(2)), abs=1e-5)
        # finite-t minima lag the asymptotic speed from above
        assert est.x0 < est.mean < est.x0 + 0.3
        assert est.ci_low <= est.mean <= est.ci_high

    def test_frame(self, normal01_brw):
        frame = speed_estimate(normal01_brw, 5, trials=3, seed=0).to_frame()
        assert frame["trial"].tolist() == [0, 1, 2]


class TestPositivity:
    def test_drifting_walk_turns_positive(self):
        result = positivity_time(normal_brw(3.0), 20, trials=5, seed=0, prune_window=5.0)
        assert result.frequency == 1.0

    def test_negative_speed_never_positive(self, normal01_brw):
        result = positivity_time(normal01_brw, 20, trials=5, seed=0, prune_window=5.0)
        assert result.frequency == 0.0


class TestFpp:
    def test_unit_passage_times(self, unit_brw):
        reach = fpp_reach(unit_brw, 2.5, depth=4, trials=2, seed=0)
        for row in reach.counts:
            assert row.tolist() == [1, 2, 4, 0, 0]

    def test_agrees_with_exceedance_counts(self, normal01_brw):
        t = 1.5
        reach = fpp_reach(normal01_brw, t, depth=6, trials=8, seed=7)
        counts = count_exceedances(brw_env(normal01_brw), math.exp(-t), depth=6, trials=8, seed=7)
        np.testing.assert_array_equal(reach.counts, counts.counts)

    def test_path_time_equal_to_t_is_reached(self):
        step = NormalStep(mu=0.25, sigma=0.0)
        spec = BrwSpec(b=2, steps=((step, step), (step, step)))
        reach = fpp_reach(spec, 0.75, depth=4, trials=1, seed=0)
        assert reach.counts[0].tolist() == [1, 2, 4, 8, 0]

    def test_long_passage_times_do_not_underflow(self):
        # e^{-800} underflows to 0 as a path product
        step = NormalStep(mu=400.0, sigma=0.0)
        spec = BrwSpec(b=2, steps=((step, step), (step, step)))
        reach = fpp_reach(spec, 800.0, depth=3, trials=1, seed=0)
        assert reach.counts[0].tolist() == [1, 2, 4, 0]

    def test_frame(self, unit_brw):
        frame = fpp_reach(unit_brw, 1.0, depth=1, trials=1, seed=0).to_frame()
        assert frame.to_dict("list") == {"trial": [0, 0], "level": [0, 1], "reached": [1, 2]}
