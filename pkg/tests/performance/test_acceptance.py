"""
Full-size acceptance runs. Deselected by default; run with ``pytest -m slow``.
"""

import math
import time

import numpy as np
import pytest

from treecrit.services.brw import brw_env, fpp_reach, speed_estimate
from treecrit.services.catalogue import CATALOGUE, normal_brw, point_mass_env, sec51_env, sec51_rwre
from treecrit.services.classifier import find_critical_parameter
from treecrit.services.environment import parse_env
from treecrit.services.rde import iterate, mean_system
from treecrit.services.rwre import balance_residual, sample_environment, truncated_stationary
from treecrit.services.spectral import rate_function, rho, speed_x0
from treecrit.services.tree_sim import (
    count_exceedances,
    estimate_level_sums,
    gaussian_tail_oracle,
    path_tail_probability,
    sample_tree,
)

pytestmark = pytest.mark.slow


class TestCriticalParameter:
    def test_sec51_root(self):
        start = time.perf_counter()
        root = find_critical_parameter(sec51_env, (0.1, 0.9))
        assert root == pytest.approx(0.417, abs=1e-3)
        assert time.perf_counter() - start < 10


class TestMomentOracle:
    """Empirical level sums within 3 SE of the exact mean, both root colours."""

    @pytest.mark.parametrize("root_color", [1, 2])
    def test_sec51(self, root_color):
        stats = estimate_level_sums(
            sec51_env(0.5), 1.0, depth=8, trials=10_000, seed=0, root_color=root_color
        )
        assert np.all(stats.z_scores() < 3.0)

    @pytest.mark.parametrize("root_color", [1, 2])
    def test_lognormal(self, make_lognormal_config, root_color):
        env = parse_env(make_lognormal_config(mu=-0.5, sigma=0.5))
        stats = estimate_level_sums(env, 0.5, depth=8, trials=10_000, seed=1, root_color=root_color)
        assert np.all(stats.z_scores() < 3.0)


class TestPathTail:
    @pytest.mark.parametrize("n, log_a", [(25, 0.3), (40, 0.5)])
    def test_gaussian_oracle(self, lognormal_env, n, log_a):
        est = path_tail_probability(lognormal_env, n=n, log_a=log_a, trials=1_000_000, seed=2)
        oracle = gaussian_tail_oracle(0.0, 1.0, n, log_a)
        assert abs(est.empirical - oracle) < 3 * est.std_err


class TestBrwSpeed:
    def test_speed(self):
        spec = normal_brw(0.0, 1.0)
        x0 = speed_x0(brw_env(spec)).x0
        assert x0 == pytest.approx(-1.177410, abs=1e-5)
        assert rate_function(brw_env(spec), -x0).value == pytest.approx(math.log(2), abs=1e-6)

        start = time.perf_counter()
        est = speed_estimate(spec, 50, trials=50, seed=3, prune_window=30.0)
        assert x0 - 0.02 <= est.mean <= x0 + 0.12
        assert time.perf_counter() - start < 300


class TestConductances:
    def test_identity_over_many_environments(self):
        spec = sec51_rwre(0.5)
        worst = max(balance_residual(sample_environment(spec, 6, seed)) for seed in range(100))
        assert worst <= 1e-12

    def test_stationary_law(self):
        env = sample_environment(sec51_rwre(0.5), 4, seed=4)
        assert truncated_stationary(env, 4).max_abs_diff <= 1e-10


class TestRde:
    def test_subcritical_pool_means(self, subcritical_lognormal_env):
        result = iterate(subcritical_lognormal_env, pool_size=100_000, iterations=40, seed=5)
        expected = mean_system(subcritical_lognormal_env)
        assert np.all(np.abs(result.means[-1] - expected) < 3 * result.std_err[-1])

    def test_point_mass_divergence(self):
        result = iterate(point_mass_env(0.8), pool_size=1000, iterations=100, seed=6)
        assert result.diverged


class TestFppEquivalence:
    @pytest.mark.parametrize("t", [0.5, 2.0, 4.0])
    def test_counts_match(self, t):
        spec = normal_brw(0.5, 1.0)
        reach = fpp_reach(spec, t, depth=10, trials=20, seed=7)
        counts = count_exceedances(brw_env(spec), math.exp(-t), depth=10, trials=20, seed=7)
        np.testing.assert_array_equal(reach.counts, counts.counts)


class TestCatalogueProperties:
    """Structural properties on every built-in family."""

    @pytest.mark.parametrize("name", sorted(CATALOGUE))
    def test_rho_at_zero(self, name):
        family = CATALOGUE[name]
        lo, hi = family.default_range
        for p in np.linspace(lo, hi, 5):
            assert rho(family.build(float(p)), 0.0) == pytest.approx(2.0, rel=1e-10)

    @pytest.mark.parametrize("name", sorted(CATALOGUE))
    def test_seeded_trees_repeat(self, name):
        family = CATALOGUE[name]
        env = family.build(sum(family.default_range) / 2)
        first = sample_tree(env, 8, seed=8, trial_index=2)
        second = sample_tree(env, 8, seed=8, trial_index=2)
        np.testing.assert_array_equal(first.sum_zeta, second.sum_zeta)
