# Copyright (C) 2025 Veel Inc.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program. If not, see <https://www.gnu.org/licenses/>.

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.domain.errors import InvalidExponent
from src.utils.helpers import (
    derive_seed,
    dual_exponent,
    file_exists_and_nonempty,
    log_spaced_grid,
    minimize_convex_over_integers,
)


class TestDeriveSeed:
    def test_stable_and_distinct(self):
        assert derive_seed(7, 0) == derive_seed(7, 0)
        assert derive_seed(7, 0) != derive_seed(7, 1)
        assert derive_seed(7, "corruption", 0) != derive_seed(7, 0)
        assert 0 <= derive_seed(123, "x") < 2**64


class TestDualExponent:
    @pytest.mark.parametrize("p, q", [(math.inf, 1.0), (1.0, math.inf), (2.0, 2.0), (4.0, 4.0 / 3.0)])
    def test_conjugates(self, p, q):
        assert dual_exponent(p) == pytest.approx(q)

    def test_below_one(self):
        with pytest.raises(InvalidExponent):
            dual_exponent(0.5)


class TestLogSpacedGrid:
    def test_symmetric_in_log_space(self):
        grid = log_spaced_grid(0.01, 3, 1e-12, 1.0)
        assert grid == pytest.approx([0.001, 0.01, 0.1])

    def test_clamped_and_deduplicated(self):
        grid = log_spaced_grid(0.5, 9, 1e-12, 1.0)
        assert grid[-1] == 1.0
        assert grid.count(1.0) == 1
        assert grid == sorted(grid)

    def test_single_point(self):
        assert log_spaced_grid(3.0, 1, 0.0, 1.0) == [1.0]


class TestMinimizeConvexOverIntegers:
    @settings(max_examples=100, deadline=None)
    @given(
        center=st.floats(min_value=-50, max_value=500, allow_nan=False),
        curvature=st.floats(min_value=1e-3, max_value=10.0),
        hi=st.integers(min_value=0, max_value=400),
    )
    def test_matches_brute_force(self, center, curvature, hi):
        def fn(t):
            return curvature * (t - center) ** 2

        _, value = minimize_convex_over_integers(fn, 0, hi)
        assert value == pytest.approx(min(fn(t) for t in range(hi + 1)))

    def test_ties_go_to_the_smaller_argument(self):
        assert minimize_convex_over_integers(lambda t: 0.0, 0, 100) == (0, 0.0)
        assert minimize_convex_over_integers(lambda t: abs(t - 4.5), 0, 10)[0] == 4

    def test_bias_tradeoff(self):
        t, value = minimize_convex_over_integers(
            lambda t: math.exp(-t) + 0.01 * t, 0, 1_000_000
        )
        brute = min(range(2000), key=lambda s: math.exp(-s) + 0.01 * s)
        assert t == brute
        assert value == pytest.approx(math.exp(-brute) + 0.01 * brute)


class TestFileExistsAndNonempty:
    @pytest.mark.asyncio
    async def test_cases(self, tmp_path):
        full = tmp_path / "full.json"
        full.write_text("{}")
        empty = tmp_path / "empty.json"
        empty.write_text("")
        assert await file_exists_and_nonempty(full)
        assert not await file_exists_and_nonempty(empty)
        assert not await file_exists_and_nonempty(tmp_path / "absent.json")
        assert not await file_exists_and_nonempty(tmp_path)
