import numpy as np
import pytest

from denjoy_twist.circle import signed_gap, wrap
from denjoy_twist.twist import TwistSystem
from denjoy_twist.verify import one_sided_derivative


class _Identity:
    """Degenerate harness: h = Id."""

    def lift(self, x):
        return np.asarray(x, dtype=float)

    lift_inverse = lift

    def forward(self, x):
        return wrap(x)


def test_identity_gives_zero_kick():
    S = TwistSystem(_Identity())
    th = np.linspace(0, 1, 101, endpoint=False)
    assert np.all(S.phi(th) == 0.0)
    t1, r1 = S.f_apply(0.3, 0.25)
    assert t1 == 0.55 and r1 == 0.25
    assert np.all(S.invariance_residual(th) == 0.0)


def test_f_apply_zero_fiber(default_build):
    S = default_build.system
    t, r = S.f_apply(0.4, 0.0)
    assert t == 0.4 and r == S.phi(0.4)


def test_f_inverse_round_trip(default_build):
    S = default_build.system
    rng = np.random.default_rng(8)
    th, r = rng.uniform(0, 1, 10**4), rng.uniform(-1, 1, 10**4)
    t2, r2 = S.f_inverse(*S.f_apply(th, r))
    assert np.max(np.abs(signed_gap(t2, th))) <= 1e-12
    assert np.max(np.abs(r2 - r)) <= 1e-12


def test_invariance_at_marked_point(default_build):
    S = default_build.system
    assert S.invariance_residual(default_build.x(0)) <= 1e-11


def test_invariance_equispaced(default_build):
    th = np.arange(10**4) / 10**4
    assert default_build.system.invariance_residual(th).max() <= 1e-10


def test_offset_curve_not_invariant(default_build):
    th = np.arange(1000) / 1000
    assert default_build.system.invariance_residual(th, psi_offset=0.01).max() >= 1e-3


def test_psi_at_x0(default_build):
    b = default_build
    x0, x1 = b.x(0), b.x(1)
    assert b.system.psi(x0) == pytest.approx(signed_gap(x1, x0) % 1.0, abs=1e-15)


def test_psi_one_sided_slopes(default_build):
    b = default_build
    step = b.ramp_width(0) / 4
    L = one_sided_derivative(b.system.psi, b.x(0), "L", max_step=step)
    R = one_sided_derivative(b.system.psi, b.x(0), "R", max_step=step)
    assert abs(L.value - (b.slopes.beta(0, "L") - 1)) <= 1e-6 + L.richardson_error
    assert abs(R.value - (b.slopes.beta(0, "R") - 1)) <= 1e-6 + R.richardson_error
    assert abs(L.value - R.value) >= 0.09


def test_phi_smooth_at_x0(default_build):
    b = default_build
    step = min(b.ramp_width(0), b.ramp_width(-1)) / 4
    target = b.slopes.m_tilde0 - 2.0
    for side in "LR":
        est = one_sided_derivative(b.system.phi, b.x(0), side, max_step=step)
        assert est.value == pytest.approx(target, abs=1e-6)


def test_phi_equals_chi_away_from_orbit(default_build):
    b = default_build
    t = b.table
    r = t.rank(150000)
    x = t.starts[r] + 0.3 * t.lengths[r]
    assert b.system.phi(x) == b.system.chi(x)


def test_jacobian(default_build):
    S = default_build.system
    det, tw = S.jacobian_check(0.123, 0.2)
    assert det == pytest.approx(1.0, abs=1e-5)
    assert tw == pytest.approx(1.0, abs=1e-6)
    for side in "LR":
        det, _ = S.jacobian_check(default_build.x(0), 0.0, step=1e-7, side=side)
        assert det == pytest.approx(1.0, abs=1e-5)


@pytest.mark.parametrize("step", [1e-9, 1e-3])
def test_jacobian_step_range(default_build, step):
    with pytest.raises(ValueError):
        default_build.system.jacobian_check(0.1, 0.1, step=step)


def test_zero_mean(default_build):
    S = default_build.system
    fwd, inv = S.integral_parts()
    assert abs(S.integral_phi()) <= 1e-10
    assert fwd == pytest.approx(-inv, abs=1e-10)
