import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from epsbm.core.errors import InvalidN, ROutOfRange
from epsbm.services.bounds import (
    bounds_table,
    gaussian_bound,
    improved_bound,
    theorem_chain_check,
)

R_GRID = np.linspace(0.001, math.pi - 0.001, 1000)


def test_gaussian_bound_values():
    assert gaussian_bound(3, 0.0) == 2.0
    assert gaussian_bound(2, math.pi) == pytest.approx(2.0 / math.e, abs=1e-7)
    assert gaussian_bound(50, 0.5) == pytest.approx(0.578, abs=1e-3)


def test_gaussian_bound_errors():
    with pytest.raises(ROutOfRange):
        gaussian_bound(2, -0.1)
    with pytest.raises(InvalidN):
        gaussian_bound(1, 0.5)


def test_improved_bound_beats_gaussian_at_50():
    improved = improved_bound(50, 0.5)
    assert improved == pytest.approx(0.0945, abs=1e-3)
    assert improved < gaussian_bound(50, 0.5)


def test_improved_bound_vacuous_near_zero():
    assert improved_bound(2, 1e-3) >= 1.0


def test_improved_bound_errors():
    with pytest.raises(ROutOfRange):
        improved_bound(2, 0.0)
    with pytest.raises(ROutOfRange):
        improved_bound(2, math.pi)


@pytest.mark.parametrize("n", [20, 50, 100])
def test_improved_exponent_quadratic_part(n):
    # n [1 + 2^(-1/n) - 2 cos(r/2)^((n-1)/n)] = n r^2/4 - log 2 + O(r^4 n + r^2 + 1/n)
    r = 0.2
    exponent = -math.log(improved_bound(n, r))
    assert 0.8 < (exponent + math.log(2.0)) / (n * r * r / 4.0) < 1.2


@pytest.mark.parametrize("n", [2000, 5000, 10000])
def test_improved_exponent_ratio_large_n(n):
    r = 0.2
    ratio = -math.log(improved_bound(n, r)) / (n * r * r / 4.0)
    assert 0.8 < ratio < 1.2


@pytest.mark.parametrize("n", [1.5, 2, 5, 50])
def test_bounds_decrease_in_r(n):
    gaussian = [gaussian_bound(n, r) for r in R_GRID]
    improved = [improved_bound(n, r) for r in R_GRID]
    assert np.all(np.diff(gaussian) < 0)
    assert np.all(np.diff(improved) < 0)


def test_chain_example():
    first, second, third = theorem_chain_check(2, math.pi / 2)
    assert first == pytest.approx(1.0, abs=1e-12)
    assert second == pytest.approx(1.53125, abs=1e-12)
    assert third == pytest.approx(2.0 * math.exp(-0.25), abs=1e-12)


def test_chain_near_zero():
    assert theorem_chain_check(3, 1e-9) == pytest.approx((2.0, 2.0, 2.0))


@pytest.mark.parametrize("n", [1.5, 2, 5, 50])
def test_chain_on_grid(n):
    for r in R_GRID:
        first, second, third = theorem_chain_check(n, float(r))
        assert first <= second + 1e-12
        assert second <= third + 1e-12


@given(
    n=st.floats(min_value=1.0001, max_value=1000.0),
    r=st.floats(min_value=1e-9, max_value=math.pi - 1e-9),
)
def test_chain_holds(n, r):
    theorem_chain_check(n, r)


def test_chain_errors():
    with pytest.raises(ROutOfRange):
        theorem_chain_check(10, 3.2)
    with pytest.raises(InvalidN):
        theorem_chain_check(0.5, 1.0)


def test_bounds_table_outside_open_interval():
    table = bounds_table(2, [0.5, 4.0])
    inside, outside = table.rows
    assert inside.improved is not None
    assert inside.chain is not None
    assert outside.improved is None
    assert outside.chain is None
    assert outside.gaussian == pytest.approx(gaussian_bound(2, 4.0))
