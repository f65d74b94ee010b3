"""
Tests for the built-in environment families.
"""

import pytest

from treecrit.core.exceptions import UnknownFamilyError
from treecrit.models.environment import SiblingMode
from treecrit.models.verdicts import Target
from treecrit.services.catalogue import CATALOGUE, family_names, get_family, normal_brw


class TestCatalogue:
    def test_names(self):
        assert family_names() == ["normal01", "pointmass-b2", "sec51"]

    def test_unknown_family(self):
        with pytest.raises(UnknownFamilyError) as exc:
            get_family("gamma")
        assert exc.value.field == "family"
        assert "sec51" in exc.value.message

    @pytest.mark.parametrize("name", sorted(CATALOGUE))
    def test_builders_produce_binary_environments(self, name):
        family = get_family(name)
        lo, hi = family.default_range
        env = family.build(0.5 * (lo + hi))
        assert env.b == 2
        assert isinstance(family.default_target, Target)

    def test_sec51_is_rwre_joint(self):
        env = get_family("sec51").build(0.5)
        assert env.sibling_mode is SiblingMode.RWRE_JOINT
        assert env.rwre.law(2).h == 0.5

    def test_normal_brw_shape(self):
        spec = normal_brw(0.3, 2.0, b=3)
        assert spec.b == 3
        assert spec.step(3, 1).mu == 0.3
        assert spec.step(1, 2).sigma == 2.0
