"""
Tests for the label families: closed forms, domains and sampling.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from treecrit.core.exceptions import DomainError
from treecrit.distributions.families import (
    Discrete,
    ExpNegExponential,
    ExpNegGaussian,
    LogNormal,
    PointMass,
    RatioUniform,
    RecipUniform,
    Uniform,
)


class TestClosedForms:
    """E[xi^s] against hand-derived values."""

    @pytest.mark.parametrize("s", [0.0, 0.5, 1.0, 2.0, -0.5])
    def test_point_mass(self, s):
        assert PointMass(value=0.4).moment(s) == pytest.approx(0.4**s, rel=1e-14)

    @pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
    def test_uniform(self, s):
        lo, hi = 0.5, 2.0
        expected = (hi ** (s + 1) - lo ** (s + 1)) / ((s + 1) * (hi - lo))
        assert Uniform(lo=lo, hi=hi).moment(s) == pytest.approx(expected, rel=1e-12)

    def test_uniform_log_limit_at_minus_one(self):
        lo, hi = 0.5, 2.0
        expected = math.log(hi / lo) / (hi - lo)
        assert Uniform(lo=lo, hi=hi).moment(-1.0) == pytest.approx(expected, rel=1e-10)

    @pytest.mark.parametrize("s", [0.5, 1.0, 3.0])
    def test_log_normal(self, s):
        expected = math.exp(0.3 * s + 0.5 * s * s * 0.49)
        assert LogNormal(mu=0.3, sigma=0.7).moment(s) == pytest.approx(expected, rel=1e-14)

    def test_exp_neg_gaussian(self):
        dist = ExpNegGaussian(mu=1.0, sigma=2.0)
        assert dist.moment(0.5) == pytest.approx(math.exp(-0.5 + 0.5), rel=1e-14)
        assert dist.mean_log() == -1.0

    def test_exp_neg_exponential(self):
        dist = ExpNegExponential(shift=0.2, rate=3.0)
        assert dist.moment(1.0) == pytest.approx(math.exp(-0.2) * 3.0 / 4.0, rel=1e-12)

    def test_discrete(self):
        dist = Discrete.model_validate({"atoms": [{"x": 0.5, "p": 0.25}, {"x": 2.0, "p": 0.75}]})
        assert dist.moment(1.0) == pytest.approx(0.25 * 0.5 + 0.75 * 2.0, rel=1e-14)
        assert dist.is_atomic

    def test_moment_at_zero_is_exactly_one(self):
        for dist in (PointMass(value=3.0), RatioUniform(h=0.5), LogNormal(mu=1.0, sigma=2.0)):
            assert dist.moment(0.0) == 1.0


class TestQuadratureFamilies:
    """RatioUniform and RecipUniform against closed forms."""

    def test_ratio_uniform_mean(self):
        # E[(1-eta)/eta] = (-log h - (1 - h)) / (1 - h)
        h = 0.5
        expected = (-math.log(h) - (1 - h)) / (1 - h)
        assert RatioUniform(h=h).moment(1.0) == pytest.approx(expected, rel=1e-9)

    def test_ratio_uniform_domain_floor(self):
        with pytest.raises(DomainError) as exc:
            RatioUniform(h=0.5).moment(-0.9)
        assert exc.value.interval[0] == -0.5

    @pytest.mark.parametrize("s", [0.25, 1.0, 2.0, -0.5])
    def test_recip_uniform_closed_form_matches_quadrature(self, s):
        dist = RecipUniform(c=3.0, h=0.4)
        assert dist.moment(s) == pytest.approx(dist.quadrature_moment(s), rel=1e-9)

    def test_recip_uniform_at_one(self):
        h, c = 0.4, 3.0
        expected = -math.log(h) / (c * (1 - h))
        assert RecipUniform(c=c, h=h).moment(1.0) == pytest.approx(expected, rel=1e-12)


class TestEssentialSupremum:
    """log of the largest value a label reaches and the mass it carries there."""

    @pytest.mark.parametrize(
        "dist, expected",
        [
            (PointMass(value=0.4), (math.log(0.4), 1.0)),
            (Uniform(lo=0.5, hi=2.0), (math.log(2.0), 0.0)),
            (ExpNegGaussian(mu=0.3, sigma=0.0), (-0.3, 1.0)),
            (ExpNegExponential(shift=0.2, rate=1.0), (-0.2, 0.0)),
            (RatioUniform(h=0.5), (0.0, 0.0)),
            (RecipUniform(c=3.0, h=0.5), (math.log(2.0 / 3.0), 0.0)),
        ],
    )
    def test_bounded_families(self, dist, expected):
        value, mass = dist.log_sup()
        assert value == pytest.approx(expected[0], abs=1e-14)
        assert mass == expected[1]

    def test_discrete_top_atom(self):
        dist = Discrete.model_validate({"atoms": [{"x": 0.5, "p": 0.7}, {"x": 1.0, "p": 0.3}]})
        assert dist.log_sup() == (0.0, pytest.approx(0.3))

    @pytest.mark.parametrize("dist", [LogNormal(mu=0.0, sigma=1.0), ExpNegGaussian(mu=0.0, sigma=1.0)])
    def test_unbounded_families(self, dist):
        assert dist.log_sup() == (math.inf, 0.0)


class TestValidation:
    @pytest.mark.parametrize(
        "factory",
        [
            lambda: PointMass(value=0.0),
            lambda: Uniform(lo=-1.0, hi=1.0),
            lambda: Uniform(lo=2.0, hi=1.0),
            lambda: LogNormal(mu=0.0, sigma=0.0),
            lambda: RatioUniform(h=1.0),
            lambda: Discrete.model_validate({"atoms": [{"x": 1.0, "p": 0.5}]}),
        ],
    )
    def test_invalid_parameters_rejected(self, factory):
        with pytest.raises(ValidationError):
            factory()


class TestSampling:
    def test_point_mass_is_exact(self):
        rng = np.random.default_rng(0)
        assert np.all(PointMass(value=0.3).sample(rng, 10) == 0.3)

    def test_sample_mean_matches_moment(self):
        rng = np.random.default_rng(1)
        dist = RatioUniform(h=0.5)
        draws = dist.sample(rng, 200_000)
        se = draws.std() / math.sqrt(draws.size)
        assert abs(draws.mean() - dist.moment(1.0)) < 5 * se

    def test_sample_log_matches_mean_log(self):
        rng = np.random.default_rng(2)
        dist = ExpNegExponential(shift=0.5, rate=2.0)
        logs = dist.sample_log(rng, 200_000)
        assert logs.mean() == pytest.approx(dist.mean_log(), abs=0.01)

    def test_regularity_flags(self):
        assert LogNormal(mu=0.0, sigma=1.0).log_integrable
        assert ExpNegExponential(shift=0.0, rate=2.0).xlogx_integrable
