"""
Tests for golden-section minimization and bisection.
"""

import math

import pytest

from treecrit.core.exceptions import ConvergenceError, NoCrossingError
from treecrit.utils.optimize import bisect_root, golden_section_min


class TestGoldenSection:
    """Minima of unimodal functions on closed intervals."""

    def test_interior_minimum(self):
        res = golden_section_min(lambda x: (x - 0.3) ** 2, 0.0, 1.0, tol=1e-10)
        assert res.x == pytest.approx(0.3, abs=1e-8)
        assert res.fun == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("sign,expected", [(1.0, 0.0), (-1.0, 1.0)])
    def test_monotone_returns_exact_endpoint(self, sign, expected):
        res = golden_section_min(lambda x: sign * x, 0.0, 1.0)
        assert res.x == expected

    def test_flat_function_prefers_left(self):
        assert golden_section_min(lambda x: 1.0, 0.0, 1.0).x == 0.0

    def test_reversed_interval(self):
        res = golden_section_min(lambda x: (x - 2.0) ** 2, 5.0, 0.0, tol=1e-9)
        assert res.x == pytest.approx(2.0, abs=1e-7)

    def test_iteration_cap(self):
        with pytest.raises(ConvergenceError):
            golden_section_min(lambda x: x * x, -1.0, 1.0, tol=1e-300, max_iter=5)


class TestBisection:
    def test_root(self):
        assert bisect_root(lambda x: x * x - 2.0, 0.0, 2.0, 1e-12) == pytest.approx(
            math.sqrt(2.0), abs=1e-11
        )

    def test_order_insensitive(self):
        f = lambda x: math.cos(x)  # noqa: E731
        assert bisect_root(f, 3.0, 0.0, 1e-10) == pytest.approx(bisect_root(f, 0.0, 3.0, 1e-10))

    def test_no_crossing(self):
        with pytest.raises(NoCrossingError) as exc:
            bisect_root(lambda x: x * x + 1.0, -1.0, 1.0, 1e-6)
        assert exc.value.interval == (-1.0, 1.0)
