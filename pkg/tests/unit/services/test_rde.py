"""
Tests for the recursive distributional equation solver.
"""

import numpy as np
import pytest

from treecrit.core.exceptions import DomainError, NoFiniteMeanError, UnsupportedEnvironmentError
from treecrit.models.verdicts import RdeVerdict
from treecrit.services.environment import load_env
from treecrit.services.rde import existence, iterate, mean_system, mean_system_matrix
from treecrit.services.tree_sim import moment_oracle


@pytest.fixture
def pm03_env(fixtures_dir):
    return load_env(fixtures_dir / "pm03.json")


@pytest.fixture
def pm08_env(fixtures_dir):
    return load_env(fixtures_dir / "pm08.json")


class TestIterate:
    def test_point_mass_fixed_point(self, pm03_env):
        result = iterate(pm03_env, pool_size=100, iterations=100, seed=0)
        np.testing.assert_allclose(result.pools, 2.5, atol=1e-3)
        assert not result.diverged
        assert result.iterations_run == 100

    def test_subcritical_mean(self, subcritical_lognormal_env):
        result = iterate(subcritical_lognormal_env, pool_size=20_000, iterations=30, seed=1)
        expected = mean_system(subcritical_lognormal_env)
        assert expected == pytest.approx([2.023, 2.023], rel=1e-3)
        np.testing.assert_allclose(result.means[-1], expected, rtol=0.05)

    def test_pools_follow_tree_sums(self, subcritical_lognormal_env):
        depth = 5
        result = iterate(subcritical_lognormal_env, pool_size=20_000, iterations=depth, seed=2)
        oracle = sum(moment_oracle(subcritical_lognormal_env, 1.0, n) for n in range(depth + 1))
        np.testing.assert_allclose(result.means[-1], oracle, rtol=0.03)

    def test_supercritical_diverges(self, pm08_env):
        result = iterate(pm08_env, pool_size=50, iterations=100, seed=0, divergence_median=1e6)
        assert result.diverged
        assert result.iterations_run == result.diverged_at < 100

    def test_same_seed_same_pools(self, subcritical_lognormal_env):
        first = iterate(subcritical_lognormal_env, pool_size=500, iterations=5, seed=7)
        second = iterate(subcritical_lognormal_env, pool_size=500, iterations=5, seed=7)
        np.testing.assert_array_equal(first.pools, second.pools)

    def test_ks_distance_shrinks(self, subcritical_lognormal_env):
        result = iterate(subcritical_lognormal_env, pool_size=5000, iterations=20, seed=3)
        assert result.ks.shape == (20, 2)
        assert np.all(result.ks[-1] < result.ks[0])

    def test_rwre_joint_is_unsupported(self, sec51_h05_env):
        with pytest.raises(UnsupportedEnvironmentError) as exc:
            iterate(sec51_h05_env, pool_size=10, iterations=1, seed=0)
        assert exc.value.details["sibling_mode"] == "rwre_joint"

    def test_rejects_tiny_pool(self, pm03_env):
        with pytest.raises(DomainError):
            iterate(pm03_env, pool_size=1, iterations=1, seed=0)

    def test_frame(self, pm03_env):
        frame = iterate(pm03_env, pool_size=10, iterations=2, seed=0).to_frame()
        assert list(frame.columns) == ["iteration", "component", "mean", "ks_to_previous"]
        assert len(frame) == 6
        assert frame["mean"].tolist()[:2] == [1.0, 1.0]
        assert frame["ks_to_previous"].isna().sum() == 2


class TestMeanSystem:
    def test_point_mass(self, pm03_env):
        np.testing.assert_allclose(mean_system(pm03_env), [2.5, 2.5], rtol=1e-12)

    def test_no_finite_mean(self, pm08_env):
        with pytest.raises(NoFiniteMeanError):
            mean_system(pm08_env)

    def test_explicit_matrix(self):
        m = np.array([[0.2, 0.1], [0.3, 0.4]])
        expected = np.linalg.solve(np.eye(2) - m, np.ones(2))
        np.testing.assert_allclose(mean_system_matrix(m), expected)

    def test_explicit_matrix_radius_one(self):
        with pytest.raises(NoFiniteMeanError):
            mean_system_matrix(np.array([[0.5, 0.5], [0.5, 0.5]]))


class TestExistence:
    def test_verdicts(self, pm03_env, pm08_env):
        assert existence(pm03_env) is RdeVerdict.SOLUTION_EXISTS
        assert existence(pm08_env) is RdeVerdict.NO_SOLUTION
