import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from denjoy_twist.base_map import (
    BumpSpec,
    DenjoyMap,
    OrbitTable,
    build_orbit,
    eta,
    eta_antiderivative,
    g_eval,
    g_inverse,
    g_prime,
    gap_forward,
)
from denjoy_twist.circle import signed_gap
from denjoy_twist.denjoy import LengthFamily, build_table
from denjoy_twist.errors import ConstructionError, OrbitBeyondTable

GOLDEN = (math.sqrt(5) - 1) / 2
P3 = BumpSpec(3)


@pytest.fixture(scope="module")
def table():
    return build_table(GOLDEN, LengthFamily(), 2000)


def test_bump_constants():
    assert P3.c == 280.0
    assert P3.eta_max == 4.375
    assert BumpSpec(2).c == 60.0


def test_bump_rejects_small_p():
    with pytest.raises(ValueError):
        BumpSpec(1)


def test_eta_examples():
    assert eta(0.1, P3) == 0.0
    assert eta(0.25, P3) == 0.0
    assert eta(0.75, P3) == 0.0
    assert eta(0.5, P3) == 4.375


@pytest.mark.parametrize("p", [2, 3, 4, 5])
def test_eta_unit_mass(p):
    spec = BumpSpec(p)
    x, w = np.polynomial.legendre.leggauss(16)
    t = 0.5 + 0.25 * x
    assert math.fsum((0.25 * w * eta(t, spec)).tolist()) == pytest.approx(1.0, abs=1e-14)
    assert eta_antiderivative(0.75, spec) == 1.0


def test_antiderivative_examples():
    assert eta_antiderivative(0.0, P3) == 0.0
    assert eta_antiderivative(0.25, P3) == 0.0
    assert eta_antiderivative(0.5, P3) == 0.5
    assert eta_antiderivative(0.75, P3) == 1.0
    assert eta_antiderivative(1.0, P3) == 1.0


@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_antiderivative_monotone(a, b):
    lo, hi = sorted((a, b))
    assert eta_antiderivative(lo, P3) <= eta_antiderivative(hi, P3)


def test_antiderivative_matches_eta():
    t = np.linspace(0.26, 0.74, 50)
    h = 1e-6
    fd = (eta_antiderivative(t + h, P3) - eta_antiderivative(t - h, P3)) / (2 * h)
    assert np.max(np.abs(fd - eta(t, P3))) < 1e-7


def test_gap_forward_examples(table):
    for k in (-2000, -7, 0, 5, 1999):
        lk = float(table.gap_length(k))
        assert gap_forward(k, 0.0, table) == 0.0
        assert gap_forward(k, lk, table) == float(table.gap_length(k + 1))
        assert gap_forward(k, lk / 8, table) == lk / 8


def test_gap_forward_beyond_table(table):
    with pytest.raises(OrbitBeyondTable):
        gap_forward(2000, 0.0, table)


def test_g_maps_gap_endpoints(table):
    for k in (-100, 0, 3, 999):
        assert abs(signed_gap(g_eval(table.start(k), table), table.start(k + 1))) < 1e-16
        end = table.start(k) + float(table.gap_length(k))
        end1 = table.start(k + 1) + float(table.gap_length(k + 1))
        assert abs(signed_gap(g_eval(end, table), end1)) < 1e-15


def test_g_prime_outer_eighth(table):
    for k in (-50, 0, 50):
        lk = float(table.gap_length(k))
        u = np.linspace(0, lk / 8, 9)
        x = table.start(k) + np.concatenate([u, lk - u[1:]])
        assert np.all(g_prime(x, table) == 1.0)


def test_g_inverse_round_trip(table):
    x = np.random.default_rng(11).uniform(0, 1, 10**4)
    assert np.max(np.abs(signed_gap(g_inverse(g_eval(x, table), table), x))) <= 1e-12


def test_g_increasing(table):
    g = DenjoyMap(table)
    x = np.sort(np.random.default_rng(2).uniform(0, 1, 10**5))
    assert np.all(np.diff(g.lift(x)) > 0)


def test_orbit_defaults(default_build):
    o, t = default_build.orbit, default_build.table
    assert o.u_at(0) == float(t.gap_length(0)) / 2
    # 1 + ((100/101)^2 - 1) * 4.375
    assert o.alpha_at(0) == pytest.approx(0.9137952161552787, rel=1e-12)
    assert o.alpha_at(0) == pytest.approx(1 + ((100 / 101) ** 2 - 1) * 4.375, rel=1e-9)
    assert np.allclose(o.m[1:], o.alpha[1:] + 1.0 / o.alpha[:-1], rtol=0, atol=1e-15)


def test_m_tends_to_two(default_build):
    o = default_build.orbit
    dev = np.abs(o.m - 2.0)
    K = o.K
    assert dev[K + 300] < dev[K + 10] and dev[K - 300] < dev[K - 10]
    assert dev[0] < 1e-3 and dev[-1] < 1e-3


def test_orbit_in_gaps(default_build):
    o, t = default_build.orbit, default_build.table
    assert np.all((o.u > 0) & (o.u < t.gap_length(o.ks())))


def test_orbit_errors(table):
    with pytest.raises(ConstructionError):
        build_orbit(0.5, 2000, table)
    with pytest.raises(ConstructionError):
        build_orbit(1.0, 10, table)


def test_orbit_round_trip(table):
    o = build_orbit(0.3, 25, table)
    o2 = OrbitTable.from_dict(o.to_dict())
    assert np.array_equal(o.u, o2.u) and np.array_equal(o.m, o2.m)


def test_semiconjugacy_residual(default_build):
    from denjoy_twist.circle import rotate
    from denjoy_twist.denjoy import semiconjugacy

    t, g = default_build.table, default_build.g
    x = np.random.default_rng(9).uniform(0, 1, 10**4)
    err = np.abs(signed_gap(semiconjugacy(g.forward(x), t), rotate(semiconjugacy(x, t), t.alpha)))
    assert err.max() <= 2 * t.tail_bound
