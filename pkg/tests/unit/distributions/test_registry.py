"""
Tests for the family registry and step laws.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from treecrit.distributions import FamilyCapabilities, get_registry
from treecrit.distributions.families import Discrete, ExpNegGaussian, PointMass
from treecrit.distributions.steps import DiscreteStep, NormalStep, PointMassStep, ShiftedExponentialStep

BUILT_IN = {
    "point_mass",
    "uniform",
    "log_normal",
    "discrete",
    "exp_neg_gaussian",
    "exp_neg_exponential",
    "ratio_uniform",
    "recip_uniform",
}


class TestRegistry:
    """Singleton lookup of label families by kind."""

    def test_singleton(self):
        assert get_registry() is get_registry()

    def test_built_in_kinds_registered(self):
        assert BUILT_IN <= set(get_registry().kinds())

    def test_build_from_payload(self):
        dist = get_registry().build({"kind": "point_mass", "value": 0.4})
        assert isinstance(dist, PointMass)
        assert dist.value == 0.4

    def test_unknown_kind(self):
        with pytest.raises(KeyError):
            get_registry().build({"kind": "gamma", "shape": 2.0})

    def test_bad_parameters_raise_validation_error(self):
        with pytest.raises(ValidationError):
            get_registry().build({"kind": "log_normal", "mu": 0.0, "sigma": -1.0})

    def test_metadata_listing(self):
        listing = {meta.kind: meta for meta in get_registry().list_families()}
        assert listing["point_mass"].supports(FamilyCapabilities.ATOMIC)
        assert listing["ratio_uniform"].supports(FamilyCapabilities.QUADRATURE)
        assert listing["log_normal"].parameters == ["mu", "sigma"]


class TestStepLaws:
    """Each step law maps to the label law of exp(-eta)."""

    def test_normal_to_label(self):
        label = NormalStep(mu=0.5, sigma=1.0).to_label()
        assert isinstance(label, ExpNegGaussian)
        assert label.moment(1.0) == pytest.approx(math.exp(-0.5 + 0.5))

    def test_point_mass_to_label(self):
        label = PointMassStep(value=1.0).to_label()
        assert label.moment(1.0) == pytest.approx(math.exp(-1.0))
        assert PointMassStep(value=1.0).is_atomic

    def test_shifted_exponential_to_label(self):
        step = ShiftedExponentialStep(shift=-0.5, rate=2.0)
        assert step.to_label().moment(1.0) == pytest.approx(math.exp(0.5) * 2.0 / 3.0)

    def test_discrete_to_label(self):
        step = DiscreteStep.model_validate(
            {"kind": "discrete", "atoms": [{"x": 0.0, "p": 0.5}, {"x": 1.0, "p": 0.5}]}
        )
        label = step.to_label()
        assert isinstance(label, Discrete)
        assert label.moment(1.0) == pytest.approx(0.5 + 0.5 * math.exp(-1.0))

    def test_discrete_probabilities_must_sum_to_one(self):
        with pytest.raises(ValidationError):
            DiscreteStep.model_validate({"kind": "discrete", "atoms": [{"x": 0.0, "p": 0.4}]})

    def test_sampling_is_seeded(self):
        step = NormalStep(mu=0.0, sigma=1.0)
        a = step.sample(np.random.default_rng(5), 8)
        b = step.sample(np.random.default_rng(5), 8)
        assert np.array_equal(a, b)
