"""Verification suites: module invariants and the acceptance criteria.

Each suite appends entries to a VerificationReport and draws random
samples from its own stream (see ``suite_rng``), so the report does not
depend on which other suites run or in what order.
"""

from __future__ import annotations

import math

import numpy as np

from .base_map import build_orbit, eta
from .build import Build, perturbed
from .circle import rotate, rotation_order, signed_gap, wrap
from .denjoy import normalize, semiconjugacy
from .errors import ConstructionError
from .surgery import fixed_point_plus, seed_slopes, validate_slopes
from .verify import (
    VerificationReport,
    one_sided_derivative,
    rotation_number,
    suite_rng,
    two_sequence_c1_test,
)

C3_RANGE = range(-50, 51)
C4_RANGE = range(-20, 21)
C5_RADII = (100, 1000)
C5_K_ORBIT = 1000


def _max(a) -> float:
    a = np.asarray(a, dtype=float)
    return float(a.max()) if a.size else 0.0


# -- module invariants ----------------------------------------------------


def suite_circle(b: Build, rep: VerificationReport, rng):
    x = rng.uniform(-5.0, 5.0, 10**5)
    w = wrap(x)
    rep.add("circle.wrap_idempotent", np.array_equal(wrap(w), w) and w.max() < 1.0, 0.0, 0.0)
    a, c = rng.uniform(0, 1, 10**5), rng.uniform(0, 1, 10**5)
    s1, s2 = signed_gap(a, c), signed_gap(c, a)
    m = np.abs(s1) != 0.5
    err = _max(np.abs(s1[m] + s2[m]))
    rep.add("circle.signed_gap_antisymmetric", err == 0.0, err, 0.0)
    th, al = rng.uniform(0, 1, 10**5), rng.uniform(-1, 1, 10**5)
    back = rotate(rotate(th, al), -al)
    err = _max(np.abs(signed_gap(back, th)) / np.spacing(1.0))
    rep.add("circle.rotate_round_trip_ulps", err <= 1.0, err, 1.0)
    n = 2000
    o1, o2 = rotation_order(b.table.alpha, n), rotation_order(b.table.alpha, n)
    ok = np.array_equal(np.sort(o1), np.arange(-n, n + 1)) and np.array_equal(o1, o2)
    rep.add("circle.rotation_order_bijective", ok, 0.0, 0.0, f"N={n}")


def suite_denjoy(b: Build, rep: VerificationReport, rng):
    t = b.table
    ok = bool(np.all(np.diff(t.starts) > 0) and np.all(np.diff(t.rot_pos) > 0))
    ok &= bool(np.array_equal(t.ks, rotation_order(t.alpha, t.N)))
    rep.add("denjoy.order_isomorphism", ok, 0.0, 0.0)
    rep.add("denjoy.a0_is_zero", t.start(0) == 0.0, t.start(0), 0.0)
    d = t.mass_defect()
    rep.add("denjoy.mass_conservation", d <= 1e-12, d, 1e-12)
    res = t.residual_mass()
    rep.add(
        "denjoy.tail_honesty", res <= t.tail_bound + 1e-12, res, t.tail_bound + 1e-12,
        "residual mass vs analytic tail bound",
    )
    ok = bool(np.all(t.residual_lengths > 0) and np.all(t.lengths > 0))
    rep.add("denjoy.arcs_positive", ok, float(t.residual_lengths.min()), 0.0)
    ks = rng.integers(-t.N, t.N + 1, 1000)
    fr = rng.uniform(0, 1, 1000)
    u = fr * t.gap_length(ks)
    bad = 0
    for k, uu in zip(ks.tolist(), u.tolist()):
        hit = t.locate(t.start(k) + uu)
        if not (hasattr(hit, "k") and hit.k == k and abs(hit.u - uu) <= 1e-15):
            bad += 1
    rep.add("denjoy.locate_round_trip", bad == 0, bad, 0)
    x = np.sort(rng.uniform(0, 1, 10**4))
    j = semiconjugacy(x, t)
    # circular monotonicity: at most one descent around the circle
    desc = int(np.sum(np.diff(j) < 0))
    rep.add("denjoy.semiconjugacy_monotone", desc <= 1, desc, 1)
    a1 = normalize(t.family, t.N)
    a2 = normalize(t.family, 2 * t.N)
    lim = t.family.tail_majorant(t.N) * a1 * a1
    rep.add("denjoy.normalizer_stable", abs(a2 - a1) < lim, abs(a2 - a1), lim, "N_sum doubled")


def suite_base_map(b: Build, rep: VerificationReport, rng):
    t, g = b.table, b.g
    x = rng.uniform(0, 1, 10**4)
    err = _max(np.abs(signed_gap(g.inverse(g.forward(x)), x)))
    rep.add("base_map.inverse_round_trip", err <= 1e-12, err, 1e-12)
    slopes = g.arc_slopes()
    S0, S1 = g._fwd[0], g._fwd[1]
    short = (S1 - S0) < 1e-6
    dev = _max(np.abs(slopes[short] - 1.0))
    rep.add("base_map.residual_ratio_near_one", dev < 0.05, dev, 0.05, "arcs shorter than 1e-6")
    # sup |g'_k - 1| over |k| >= K is |l_{k+1}/l_k - 1| * eta_max, tail maxima
    k = np.arange(-t.N, t.N)
    sup_k = np.abs(t.gap_length(k + 1) / t.gap_length(k) - 1.0) * b.spec.eta_max
    per = np.zeros(t.N + 1)
    np.maximum.at(per, np.abs(k), sup_k)
    tail = np.maximum.accumulate(per[::-1])[::-1]
    ok = bool(np.all(np.diff(tail) <= 0) and tail[-1] < tail[0])
    rep.add("base_map.gap_derivatives_converge", ok, float(tail[-1]), float(tail[0]))
    j1 = semiconjugacy(g.forward(x), t)
    j0 = rotate(semiconjugacy(x, t), t.alpha)
    err = _max(np.abs(signed_gap(j1, j0)))
    rep.add("base_map.semiconjugacy", err <= 2 * t.tail_bound, err, 2 * t.tail_bound)
    n = 10**4
    rho = rotation_number(g.lift, n)
    tol = 10.0 / n + 2 * t.tail_bound
    rep.add("base_map.rotation_number", abs(rho - t.alpha) <= tol, abs(rho - t.alpha), tol)
    o = b.orbit
    ks = o.ks()
    u = o.u
    ok = bool(np.all(u > 0) and np.all(u < t.gap_length(ks)))
    rep.add("base_map.orbit_in_gaps", ok, 0.0, 0.0)
    lk = t.gap_length(ks)
    a_expect = 1.0 + (t.gap_length(ks + 1) / lk - 1.0) * eta(u / lk, b.spec)
    err = _max(np.abs(a_expect - o.alpha))
    rep.add("base_map.orbit_slopes", err == 0.0, err, 0.0)
    xs = np.array([o.position(k, t) for k in ks[:-1]])
    xn = np.array([o.position(k + 1, t) for k in ks[:-1]])
    err = _max(np.abs(signed_gap(g.forward(xs), xn)))
    rep.add("base_map.orbit_is_g_orbit", err <= 1e-15, err, 1e-15)


def suite_surgery(b: Build, rep: VerificationReport, rng):
    s, o, h = b.slopes, b.orbit, b.h
    errs = validate_slopes(s, o)
    rep.add("surgery.slopes_valid", not errs, len(errs), 0, "; ".join(errs))
    K = o.K
    worst = 0.0
    for side in ("L", "R"):
        bal = s.balance(side)
        ks = np.arange(-K + 1, K + 1)
        target = np.where(ks == 0, s.m_tilde0, o.m[1:])
        worst = max(worst, _max(np.abs(bal - target)))
    rep.add("surgery.balance_identity", worst <= 1e-12, worst, 1e-12)
    ok = s.beta_L[K] != s.beta_R[K] and s.m_tilde0 > o.m_at(0)
    rep.add("surgery.seed_constraints", ok, s.m_tilde0 - o.m_at(0), 0.0, "m~0 - m0")
    x = rng.uniform(0, 1, 10**4)
    err = _max(np.abs(signed_gap(h.inverse(h.forward(x)), x)))
    rep.add("surgery.h_inverse_round_trip", err <= 1e-12, err, 1e-12)
    xs = np.array([b.x(k) for k in o.ks()[:-1]])
    xn = np.array([b.x(k + 1) for k in o.ks()[:-1]])
    err = _max(np.abs(signed_gap(h.forward(xs), xn)))
    rep.add("surgery.h_maps_orbit", err <= 1e-15, err, 1e-15)
    # h = g at every gap endpoint and on residual arcs
    t = b.table
    pts = np.concatenate([t.starts, wrap(t.ends), 0.5 * (t.ends + t.next_starts) % 1.0])
    err = _max(np.abs(signed_gap(h.forward(pts), b.g.forward(pts))))
    rep.add("surgery.h_equals_g_off_gaps", err <= 1e-15, err, 1e-15)


def suite_twist(b: Build, rep: VerificationReport, rng):
    S = b.system
    th = rng.uniform(0, 1, 10**4)
    r = rng.uniform(-1, 1, 10**4)
    t2, r2 = S.f_inverse(*S.f_apply(th, r))
    err = max(_max(np.abs(signed_gap(t2, th))), _max(np.abs(r2 - r)))
    rep.add("twist.f_inverse_round_trip", err <= 1e-12, err, 1e-12)
    fwd, inv = S.integral_parts()
    err = abs(fwd + inv)
    rep.add(
        "twist.change_of_variables", err <= 1e-10, err, 1e-10,
        f"int(h-Id)={fwd!r} int(h^-1-Id)={inv!r}",
    )
    # phi = chi wherever h = g and h^-1 = g^-1: on residual arcs far from the orbit
    t = b.table
    mid = 0.5 * (t.ends + t.next_starts) % 1.0
    mid = mid[rng.choice(mid.size, 1000, replace=False)]
    err = _max(np.abs(S.phi(mid) - S.chi(mid)))
    rep.add("twist.phi_equals_chi_off_surgery", err <= 1e-15, err, 1e-15)


def suite_verifier(b: Build, rep: VerificationReport, rng):
    worst = 0.0
    for _ in range(20):
        c = rng.uniform(-2, 2, 4)
        x = float(rng.uniform(0.2, 0.8))
        side = "L" if rng.uniform() < 0.5 else "R"
        fn = np.polynomial.Polynomial(c)
        est = one_sided_derivative(fn, x, side)
        worst = max(worst, abs(est.value - fn.deriv()(x)))
    rep.add("verifier.richardson_cubic", worst <= 1e-10, worst, 1e-10)
    worst = 0.0
    for a in rng.uniform(0, 1, 10):
        rho = rotation_number(lambda y, a=a: y + a, 1000, float(rng.uniform()))
        worst = max(worst, abs(rho - a))
    rep.add("verifier.rotation_of_rigid_rotation", worst <= 1e-12, worst, 1e-12)
    # 2y - 1/4 is evaluated without rounding near y = 1/2, so any spread is a sampler bug
    spread = two_sequence_c1_test(lambda y: 2.0 * y - 0.25, 0.5, 1000, 1e-6, rng)
    rep.add("verifier.affine_spread", spread <= 1e-12, spread, 1e-12, "affine function, radius 1e-6")


# -- acceptance criteria ---------------------------------------------------


def _phi_step(b: Build, k: int) -> float:
    """Largest derivative step staying inside the ramps seen by phi at x_k."""
    eps = [b.ramp_width(k)]
    if k - 1 >= -b.orbit.K:
        eps.append(b.ramp_width(k - 1))
    return min(eps) / 4.0


def _phi_c1_at(b: Build, k: int, rng):
    S = b.system
    x = b.x(k)
    step = _phi_step(b, k)
    L = one_sided_derivative(S.phi, x, "L", max_step=step)
    R = one_sided_derivative(S.phi, x, "R", max_step=step)
    spread = two_sequence_c1_test(S.phi, x, 1000, 1e-6, rng)
    return L, R, spread


def criterion_01(b: Build, rep, rng):
    th = np.arange(10**4) / 10**4
    res = _max(b.system.invariance_residual(th))
    rep.add("criterion_01_graph_invariance", res <= 1e-10, res, 1e-10, "10^4 equispaced theta")


def criterion_02(b: Build, rep, rng):
    S, t, h = b.system, b.table, b.h
    th = np.arange(10**4) / 10**4
    d1 = _max(S.restriction_defect(th))
    x = rng.uniform(0, 1, 10**4)
    d2 = _max(np.abs(signed_gap(semiconjugacy(h.forward(x), t), rotate(semiconjugacy(x, t), t.alpha))))
    n = 10**4
    d3 = abs(rotation_number(h.lift, n) - t.alpha)
    tol2, tol3 = 2 * t.tail_bound, 10.0 / n + 2 * t.tail_bound
    ok = d1 <= 1e-12 and d2 <= tol2 and d3 <= tol3
    worst = max(d1 / 1e-12, d2 / tol2, d3 / tol3)
    rep.add(
        "criterion_02_denjoy_conjugacy", ok, worst, 1.0,
        f"restriction={d1:.3g}/1e-12 semiconjugacy={d2:.3g}/{tol2:.3g} rotation={d3:.3g}/{tol3:.3g}",
    )


def criterion_03(b: Build, rep, rng):
    o, s = b.orbit, b.slopes
    worst_ratio, worst_spread, fails = 0.0, 0.0, []
    for k in C3_RANGE:
        L, R, spread = _phi_c1_at(b, k, rng)
        target = (s.m_tilde0 if k == 0 else o.m_at(k)) - 2.0
        e_lr = abs(L.value - R.value)
        tol_lr = 1e-6 + max(L.richardson_error, R.richardson_error)
        e_t = max(abs(L.value - target), abs(R.value - target))
        worst_ratio = max(worst_ratio, e_lr / tol_lr, e_t / 1e-6)
        worst_spread = max(worst_spread, spread)
        if e_lr > tol_lr or e_t > 1e-6 or spread > 1e-3:
            fails.append(k)
    rep.add(
        "criterion_03_phi_c1_on_orbit", not fails, worst_spread, 1e-3,
        f"k in [-50, 50]; worst slope error / tolerance = {worst_ratio:.3g}; failing k: {fails}",
    )


def criterion_04(b: Build, rep, rng):
    S, s, c = b.system, b.slopes, b.config
    worst, fails = math.inf, []
    for k in C4_RANGE:
        step = b.ramp_width(k) / 4.0
        x = b.x(k)
        L = one_sided_derivative(S.psi, x, "L", max_step=step).value
        R = one_sided_derivative(S.psi, x, "R", max_step=step).value
        need = 0.9 * abs(s.beta(k, "L") - s.beta(k, "R"))
        if k == 0:
            need = max(need, 0.9 * abs(c.dL - c.dR))
        worst = min(worst, abs(L - R) / need)
        if abs(L - R) < need:
            fails.append(k)
    rep.add(
        "criterion_04_psi_kinks", not fails, worst, 1.0,
        f"min over k in [-20, 20] of |psi'_L - psi'_R| / (0.9 |beta^L - beta^R|); failing k: {fails}",
    )


def criterion_05(b: Build, rep, rng):
    K = max(C5_K_ORBIT, b.orbit.K)
    if K + 1 > b.table.N:
        rep.add("criterion_05_slope_recursion", False, math.nan, 0.0, "table too small for K_orbit=1000")
        return
    orbit = build_orbit(b.config.x0_fraction, K, b.table, b.spec)
    try:
        slopes = seed_slopes(orbit, b.config.dL, b.config.dR, b.config.fL)
    except ConstructionError as exc:
        rep.add("criterion_05_slope_recursion", False, math.nan, 0.0, str(exc))
        return
    a = orbit.alpha
    fwd_ok = all(np.all(bb[K:] > a[K:]) for bb in (slopes.beta_L, slopes.beta_R))
    bwd_ok = all(np.all(bb[:K] < a[:K]) for bb in (slopes.beta_L, slopes.beta_R))
    ks = orbit.ks()
    excess = orbit.m - 2.0
    worst, parts = 0.0, []
    for rad in C5_RADII:
        eps = max(0.0, float(excess[np.abs(ks) >= rad].max()))
        env = 2.0 * (fixed_point_plus(eps) - 1.0) + 0.01
        for k in (rad, -rad):
            for side in ("L", "R"):
                dev = abs(slopes.beta(k, side) - 1.0)
                worst = max(worst, dev / env)
        parts.append(f"|k|={rad}: envelope={env:.4g}")
    ok = fwd_ok and bwd_ok and worst <= 1.0
    rep.add(
        "criterion_05_slope_recursion", ok, worst, 1.0,
        f"K_orbit={K}; domination fwd={fwd_ok} bwd={bwd_ok}; " + "; ".join(parts),
    )


def _gl_integral(fn, pts):
    x, w = np.polynomial.legendre.leggauss(8)
    x, w = 0.5 * (x + 1.0), 0.5 * w
    lo, hi = pts[:-1], pts[1:]
    keep = hi > lo
    lo, hi = lo[keep], hi[keep]
    nodes = lo[:, None] + (hi - lo)[:, None] * x[None, :]
    return math.fsum(((fn(nodes.ravel()).reshape(nodes.shape) * w).sum(axis=1) * (hi - lo)).tolist())


def criterion_06(b: Build, rep, rng):
    h, g, t, spec = b.h, b.g, b.table, b.spec
    checked, fails, worst_int, worst_sup = 0, [], 0.0, 0.0
    n = 2049
    for p in b.profiles:
        k, side = p.k, p.side
        i = k + b.orbit.K
        lk = float(t.gap_length(k))
        uk = float(b.orbit.u_at(k))
        kk = np.array([k])
        end = float(h.local_derivative(kk, np.array([uk]), side)[0])
        ok_end = end == p.beta
        if side == "L":
            a, z = 0.0, uk
            brk = [p.bump_lo, p.bump_hi, h.s0[i]]
            outer = np.linspace(0.0, 0.125 * lk, 33)
        else:
            a, z = uk, lk
            brk = [h.s1[i], p.bump_lo, p.bump_hi]
            outer = np.linspace(0.875 * lk, lk, 33)
        pts = np.array(sorted({a, z, *[q for q in (0.25 * lk, 0.5 * lk, 0.75 * lk, *brk) if a < q < z]}))

        def dh(u, k=k):
            return h.local_derivative(np.full(u.shape, k), u)

        def dg(u, k=k):
            return g.local_derivative(np.full(u.shape, k), u)

        I_h = _gl_integral(dh, pts)
        I_g = _gl_integral(dg, pts)
        rel = abs(I_h - I_g) / abs(I_g)
        ko = np.full(outer.shape, k)
        ok_outer = np.array_equal(h.local_derivative(ko, outer), g.local_derivative(ko, outer))
        ok_outer &= np.array_equal(h.local_forward(ko, outer), g.local_forward(ko, outer))
        u = np.linspace(a, z, n)[1:-1]
        d = dh(u)
        sup = max(_max(np.abs(d - 1.0)), abs(end - 1.0))
        ok = ok_end and rel <= 1e-13 and ok_outer and sup <= p.bound and bool(np.all(d > 0))
        worst_int = max(worst_int, rel)
        worst_sup = max(worst_sup, sup / p.bound)
        checked += 1
        if not ok:
            fails.append((k, side))
    expected = 2 * (2 * b.orbit.K + 1)
    rep.add(
        "criterion_06_surgery_contract", not fails and checked == expected, worst_int, 1e-13,
        f"{checked}/{expected} half-gaps; worst sup|delta-1|/bound = {worst_sup:.4g}; failing: {fails[:10]}",
    )


def criterion_07(b: Build, rep, rng):
    x = np.sort(rng.uniform(0, 1, 10**5))
    dh, dg = np.diff(b.h.lift(x)), np.diff(b.g.lift(x))
    mono = bool(np.all(dh > 0) and np.all(dg > 0))
    y = rng.uniform(0, 1, 10**4)
    err = _max(np.abs(signed_gap(b.h.forward(b.h.inverse(y)), y)))
    rep.add(
        "criterion_07_homeomorphism", mono and err <= 1e-12, err, 1e-12,
        f"strictly increasing on 1e5 sorted samples: {mono}",
    )


def criterion_08(b: Build, rep, rng):
    S, o = b.system, b.orbit
    xs = np.array([b.x(k) for k in range(-o.K, o.K + 1)])
    pts = []
    while len(pts) < 1000:
        th, r = float(rng.uniform(0, 1)), float(rng.uniform(-0.5, 0.5))
        if np.min(np.abs(signed_gap(wrap(th + r), xs))) > 1e-4:
            pts.append((th, r))
    det_err, tw_err = 0.0, 0.0
    for th, r in pts:
        det, tw = S.jacobian_check(th, r)
        det_err, tw_err = max(det_err, abs(det - 1.0)), max(tw_err, abs(tw - 1.0))
    one = 0.0
    for k in (0, 1, -1, 5):
        for side in ("L", "R"):
            det, tw = S.jacobian_check(b.x(k), 0.0, step=1e-7, side=side)
            one = max(one, abs(det - 1.0))
    ok = det_err <= 1e-5 and tw_err <= 1e-6 and one <= 1e-5
    rep.add(
        "criterion_08_symplectic_twist", ok, max(det_err, one), 1e-5,
        f"twist error {tw_err:.3g} (tol 1e-6); one-sided det error on orbit {one:.3g}",
    )


def lipschitz_bound(b: Build) -> float:
    """max(sup|h' - 1| over gaps, max |beta - 1|) for the built h."""
    t = b.table
    k = np.arange(-t.N, t.N)
    gap = np.abs(t.gap_length(k + 1) / t.gap_length(k) - 1.0) * b.spec.eta_max
    unsurgered = gap[np.abs(k) > b.orbit.K]
    sup_h = max(_max(unsurgered), max(p.sup_dev for p in b.profiles))
    sup_h = max(sup_h, _max(np.abs(b.g.arc_slopes() - 1.0)))
    beta = max(_max(np.abs(b.slopes.beta_L - 1.0)), _max(np.abs(b.slopes.beta_R - 1.0)))
    return max(sup_h, beta)


def criterion_09(b: Build, rep, rng):
    S = b.system
    n = 10**5
    x1 = rng.uniform(0, 1, n)
    scale = 10.0 ** rng.uniform(-9, -0.5, n)
    x2 = wrap(x1 + scale * rng.choice([-1.0, 1.0], n))
    dx = signed_gap(x2, x1)
    q = np.abs((S.psi(x2) - S.psi(x1)) / dx)
    lip = _max(q)
    bound = lipschitz_bound(b) + 1e-3
    rep.add("criterion_09_lipschitz", lip <= bound, lip, bound, "10^5 random pairs")


def criterion_10(b: Build, rep, rng):
    val = b.system.integral_phi()
    rep.add("criterion_10_zero_mean", abs(val) <= 1e-10, abs(val), 1e-10, "gap-aware Gauss-Legendre")


def criterion_11(b: Build, rep, rng):
    bad = perturbed(b, 0.01)
    spread = two_sequence_c1_test(bad.system.phi, bad.x(0), 1000, 1e-6, rng)
    th = np.arange(10**3) / 10**3
    res = _max(b.system.invariance_residual(th, psi_offset=0.01))
    ok = spread >= 5e-3 and res >= 1e-3
    rep.add(
        "criterion_11_negative_controls", ok, min(spread / 5e-3, res / 1e-3), 1.0,
        f"perturbed beta_0^R spread={spread:.4g} (must be >= 5e-3); "
        f"offset psi residual={res:.4g} (must be >= 1e-3)",
    )


MODULE_SUITES = {
    "circle": suite_circle,
    "denjoy": suite_denjoy,
    "base_map": suite_base_map,
    "surgery": suite_surgery,
    "twist": suite_twist,
    "verifier": suite_verifier,
}
CRITERIA = {f"c{i}": fn for i, fn in enumerate(
    [criterion_01, criterion_02, criterion_03, criterion_04, criterion_05, criterion_06,
     criterion_07, criterion_08, criterion_09, criterion_10, criterion_11], start=1)}
ALL_SUITES = {**MODULE_SUITES, **CRITERIA}
GROUPS = {"all": list(ALL_SUITES), "modules": list(MODULE_SUITES), "acceptance": list(CRITERIA)}


def expand_suites(names) -> list:
    """Resolve suite and group names; unknown names raise KeyError."""
    out = []
    for n in names:
        for m in GROUPS.get(n, [n]):
            if m not in ALL_SUITES:
                raise KeyError(m)
            if m not in out:
                out.append(m)
    # canonical order keeps reports independent of the request order
    return [m for m in ALL_SUITES if m in out]


def run_suite(build: Build, suites=("all",), seed: int | None = None) -> VerificationReport:
    seed = build.config.rng_seed if seed is None else seed
    manifest = dict(build.manifest())
    manifest["rng_seed"] = seed
    rep = VerificationReport(manifest)
    for name in expand_suites(suites):
        ALL_SUITES[name](build, rep, suite_rng(seed, name))
    return rep
