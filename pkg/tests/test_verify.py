import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from denjoy_twist.build import perturbed
from denjoy_twist.suites import ALL_SUITES, GROUPS, expand_suites, run_suite
from denjoy_twist.verify import (
    VerificationReport,
    one_sided_derivative,
    rotation_number,
    suite_rng,
    two_sequence_c1_test,
)

coef = st.floats(-3.0, 3.0)


@settings(max_examples=50)
@given(coef, coef, coef, coef, st.floats(0.1, 0.9), st.sampled_from("LR"))
def test_richardson_exact_on_cubics(a, b, c, d, x, side):
    p = np.polynomial.Polynomial([a, b, c, d])
    est = one_sided_derivative(p, x, side)
    assert est.value == pytest.approx(p.deriv()(x), abs=1e-10)
    assert est.richardson_error >= 0
    assert len(est.steps_used) >= 2


def test_one_sided_derivative_sees_kink():
    f = lambda x: np.abs(np.asarray(x) - 0.5) * 3.0
    assert one_sided_derivative(f, 0.5, "L").value == pytest.approx(-3.0, abs=1e-12)
    assert one_sided_derivative(f, 0.5, "R").value == pytest.approx(3.0, abs=1e-12)


def test_one_sided_derivative_side_validated():
    with pytest.raises(ValueError):
        one_sided_derivative(np.sin, 0.5, "both")


def test_two_sequence_affine_and_kink():
    rng = np.random.default_rng(0)
    assert two_sequence_c1_test(lambda y: 2.0 * y - 0.25, 0.5, 1000, 1e-6, rng) <= 1e-12
    kink = lambda y: np.where(np.asarray(y) < 0.5, 1.0, 1.1) * (np.asarray(y) - 0.5)
    assert two_sequence_c1_test(kink, 0.5, 1000, 1e-6, rng) >= 0.9 * 0.1
    with pytest.raises(ValueError):
        two_sequence_c1_test(kink, 0.5, 5)


def test_rotation_number_of_rotation():
    rng = np.random.default_rng(1)
    for a in rng.uniform(0, 1, 10):
        rho = rotation_number(lambda y, a=a: y + a, 1000, float(rng.uniform()))
        assert rho == pytest.approx(a, abs=1e-12)
    with pytest.raises(ValueError):
        rotation_number(lambda y: y, 0)


def test_rotation_number_of_g_and_h(default_build):
    t = default_build.table
    n = 10**4
    tol = 10 / n + 2 * t.tail_bound
    assert abs(rotation_number(default_build.g.lift, n) - t.alpha) <= tol
    assert abs(rotation_number(default_build.h.lift, n) - t.alpha) <= tol


def test_empty_report_passes(default_build):
    rep = run_suite(default_build, [])
    assert rep.results == [] and rep.status == "pass"
    assert VerificationReport({}).to_dict() == {"manifest": {}, "results": [], "status": "pass"}


def test_report_shape(default_build):
    rep = run_suite(default_build, ["c1"])
    d = rep.to_dict()
    assert set(d) == {"manifest", "results", "status"}
    assert set(d["results"][0]) == {"name", "status", "measured", "tolerance", "details"}
    assert d["manifest"]["K_orbit"] == 300 and d["manifest"]["rng_seed"] == 1


def test_report_deterministic_and_order_free(default_build):
    names = ["circle", "denjoy", "c2", "c9", "c11"]
    a = json.dumps(run_suite(default_build, names).to_dict())
    b = json.dumps(run_suite(default_build, names[::-1]).to_dict())
    assert a == b


def test_suite_streams_independent():
    a = suite_rng(1, "c3").uniform(size=4)
    assert np.array_equal(a, suite_rng(1, "c3").uniform(size=4))
    assert not np.array_equal(a, suite_rng(1, "c4").uniform(size=4))


def test_expand_suites():
    assert expand_suites(["acceptance"]) == GROUPS["acceptance"]
    assert expand_suites(["c2", "circle", "c2"]) == ["circle", "c2"]
    assert len(expand_suites(["all"])) == len(ALL_SUITES)
    with pytest.raises(KeyError):
        expand_suites(["bogus"])


def test_module_suites_pass(default_build):
    rep = run_suite(default_build, ["modules"])
    assert rep.status == "pass", rep.failing()


def test_negative_control_breaks_phi_c1(default_build):
    bad = perturbed(default_build, 0.01)
    rep = run_suite(bad, ["c3"])
    assert rep.status == "fail"
    assert rep.failing() == ["criterion_03_phi_c1_on_orbit"]
