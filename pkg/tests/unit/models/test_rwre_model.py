"""
Tests for the jump-vector laws of the walk in random environment.
"""

import numpy as np
import pytest
from pydantic import ValidationError

from treecrit.distributions.families import PointMass, RatioUniform, RecipUniform
from treecrit.distributions.steps import NormalStep
from treecrit.models.brw import BrwSpec
from treecrit.models.rwre import EtaSplitJump, FixedJump, RwreSpec


class TestFixedJump:
    def test_ratio_marginals(self):
        law = FixedJump(p=(0.5, 0.25, 0.25))
        marginals = law.ratio_marginals()
        assert all(isinstance(m, PointMass) for m in marginals)
        assert [m.value for m in marginals] == [0.5, 0.5]

    @pytest.mark.parametrize("p", [(0.5, 0.25, 0.3), (1.0, 0.0, 0.0), (0.5, 0.5)])
    def test_invalid_vectors(self, p):
        with pytest.raises(ValidationError):
            FixedJump(p=p)


class TestEtaSplitJump:
    def test_sample_rows_sum_to_one(self):
        law = EtaSplitJump(h=0.5)
        rows = law.sample(np.random.default_rng(0), 1000)
        assert rows.shape == (1000, 3)
        assert np.allclose(rows.sum(axis=1), 1.0)
        assert np.all(rows[:, 0] >= 0.75 * 0.5)
        assert np.all(rows[:, 2] == 0.25)

    def test_ratio_marginals(self):
        first, second = EtaSplitJump(h=0.5).ratio_marginals()
        assert isinstance(first, RatioUniform)
        assert isinstance(second, RecipUniform)
        assert second.c == pytest.approx(3.0)

    def test_mean(self):
        assert EtaSplitJump(h=0.5).mean() == pytest.approx([0.5625, 0.1875, 0.25])

    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValidationError):
            EtaSplitJump(h=0.5, weight=0.7, tail=(0.25,))


class TestRwreSpec:
    def test_one_law_per_colour(self):
        with pytest.raises(ValidationError):
            RwreSpec(b=2, laws=(FixedJump(p=(0.5, 0.25, 0.25)),))

    def test_width_matches_b(self):
        with pytest.raises(ValidationError):
            RwreSpec(b=3, laws=tuple(FixedJump(p=(0.5, 0.25, 0.25)) for _ in range(3)))

    def test_law_lookup(self):
        spec = RwreSpec(b=2, laws=(FixedJump(p=(0.5, 0.25, 0.25)), EtaSplitJump(h=0.3)))
        assert isinstance(spec.law(2), EtaSplitJump)
        assert len(spec.ratio_marginals()) == 2


class TestBrwSpec:
    def test_shape_and_start_type(self):
        row = (NormalStep(mu=0.0, sigma=1.0), NormalStep(mu=0.0, sigma=1.0))
        with pytest.raises(ValidationError):
            BrwSpec(b=2, steps=(row,))
        with pytest.raises(ValidationError):
            BrwSpec(b=2, steps=(row, row), start_type=3)
        assert BrwSpec(b=2, steps=(row, row)).step(2, 1).mu == 0.0
