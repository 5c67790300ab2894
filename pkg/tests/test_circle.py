import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from denjoy_twist.circle import rotate, rotation_order, rotation_positions, signed_gap, wrap
from denjoy_twist.errors import ConstructionError

GOLDEN = (math.sqrt(5) - 1) / 2
finite = st.floats(-1e6, 1e6, allow_nan=False)
unit = st.floats(0.0, 1.0, exclude_max=True)


@pytest.mark.parametrize("x, expected", [(1.25, 0.25), (-0.25, 0.75), (0.0, 0.0), (1.0, 0.0), (3.0, 0.0)])
def test_wrap_examples(x, expected):
    assert wrap(x) == expected


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
def test_wrap_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        wrap(bad)


def test_wrap_array_rejects_non_finite():
    with pytest.raises(ValueError):
        wrap(np.array([0.1, math.nan]))


def test_wrap_tiny_negative_stays_below_one():
    assert 0.0 <= wrap(-1e-20) < 1.0


@given(finite)
def test_wrap_idempotent_and_in_range(x):
    w = wrap(x)
    assert 0.0 <= w < 1.0
    assert wrap(w) == w


def test_rotate_examples():
    assert rotate(0.9, 0.2) == pytest.approx(0.1, abs=1e-15)
    assert rotate(0.37, 0.0) == 0.37
    assert rotate(0.0, 0.618033988749895) == 0.618033988749895


@given(unit, st.floats(-1.0, 1.0))
def test_rotate_round_trip(theta, a):
    back = rotate(rotate(theta, a), -a)
    assert abs(signed_gap(back, theta)) <= np.spacing(1.0)


def test_signed_gap_examples():
    assert signed_gap(0.1, 0.9) == pytest.approx(0.2, abs=1e-15)
    assert signed_gap(0.9, 0.1) == pytest.approx(-0.2, abs=1e-15)
    assert signed_gap(0.75, 0.25) == 0.5
    assert signed_gap(0.25, 0.75) == 0.5


@given(unit, unit)
def test_signed_gap_antisymmetric_and_in_range(a, b):
    d = signed_gap(a, b)
    assert -0.5 < d <= 0.5
    if abs(d) != 0.5:
        assert signed_gap(b, a) == -d


def test_signed_gap_exact_for_nearby_points():
    a = 0.5 + 2.0**-40
    assert signed_gap(a, 0.5) == 2.0**-40
    assert signed_gap(0.5, a) == -(2.0**-40)


def test_rotation_order_examples():
    # frac(k*alpha): 0 -> 0, -3 -> 0.146, 2 -> 0.236, -1 -> 0.382, 1 -> 0.618, -2 -> 0.764, 3 -> 0.854
    assert rotation_order(GOLDEN, 3).tolist() == [0, -3, 2, -1, 1, -2, 3]
    assert rotation_order(GOLDEN, 1).tolist() == [0, -1, 1]
    assert rotation_order(GOLDEN, 0).tolist() == [0]


def test_rotation_order_positive_subsequence():
    order = [k for k in rotation_order(GOLDEN, 3).tolist() if k >= 0]
    assert order == [0, 2, 1, 3]


def test_rotation_order_bijective_and_deterministic():
    o = rotation_order(GOLDEN, 5000)
    assert np.array_equal(np.sort(o), np.arange(-5000, 5001))
    assert np.array_equal(o, rotation_order(GOLDEN, 5000))


def test_rotation_order_rejects_rational():
    with pytest.raises(ConstructionError):
        rotation_order(0.25, 10)


def test_rotation_positions_exact_against_fractions():
    from fractions import Fraction

    pos = rotation_positions(GOLDEN, 200000)
    a = Fraction(GOLDEN)
    for k in (-200000, -12345, -1, 0, 1, 777, 199999):
        exact = float((k * a) % 1)
        assert abs(signed_gap(pos[k + 200000], exact)) <= 2e-16
