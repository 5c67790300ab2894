"""One-sided slope sequences and the derivative surgery producing h.

Along the marked orbit the modified homeomorphism h has left/right slopes
beta_k^L, beta_k^R chosen so that beta_k + 1/beta_{k-1} is the same on both
sides.  On each half-gap g' is replaced by a continuous density delta_k:
an affine ramp reaching beta_k at x_k, plus a bump elsewhere that restores
the integral of g' over the half-gap.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .base_map import (
    BumpSpec,
    DenjoyMap,
    OrbitTable,
    eta,
    eta_antiderivative,
    unit_bump,
    unit_bump_cdf,
)
from .denjoy import GapTable
from .errors import DomainError, SeedInfeasible, SurgeryInfeasible

MAX_HALVINGS = 60
OUTER = 0.125  # fraction of the gap left untouched next to each endpoint
BUMP_FILL = 0.75  # the correction bump uses the middle 3/4 of the free region


def phi_m(m: float, t: float) -> float:
    if not t > 0:
        raise DomainError(f"Phi_m needs t > 0, got {t!r}")
    return m - 1.0 / t


def phi_m_inv(m: float, t: float) -> float:
    if not t < m:
        raise DomainError(f"Phi_m^-1 needs t < m, got t={t!r}, m={m!r}")
    return 1.0 / (m - t)


def fixed_point_plus(eps: float) -> float:
    """Larger fixed point of Phi_{2+eps}."""
    if eps < 0:
        raise ValueError("eps must be >= 0")
    return (2.0 + eps + math.sqrt(eps * (4.0 + eps))) / 2.0


@dataclass
class SlopeSeq:
    K: int
    beta_L: np.ndarray  # index k + K
    beta_R: np.ndarray
    m_tilde0: float

    def beta(self, k: int, side: str) -> float:
        arr = self.beta_L if side == "L" else self.beta_R
        return float(arr[k + self.K])

    def balance(self, side: str) -> np.ndarray:
        """beta_k + 1/beta_{k-1} for k = -K+1..K."""
        b = self.beta_L if side == "L" else self.beta_R
        return b[1:] + 1.0 / b[:-1]

    def to_dict(self) -> dict:
        return {
            "K_orbit": self.K,
            "m_tilde0": self.m_tilde0,
            "beta_L": self.beta_L.tolist(),
            "beta_R": self.beta_R.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SlopeSeq":
        return cls(
            K=int(d["K_orbit"]),
            beta_L=np.array(d["beta_L"], dtype=float),
            beta_R=np.array(d["beta_R"], dtype=float),
            m_tilde0=float(d["m_tilde0"]),
        )


def _fill(orbit: OrbitTable, b0: float, bm1: float) -> np.ndarray:
    K = orbit.K
    b = np.empty(2 * K + 1)
    b[K] = b0
    b[K - 1] = bm1
    for k in range(1, K + 1):
        b[k + K] = phi_m(orbit.m_at(k), b[k - 1 + K])
    for k in range(-1, -K, -1):
        b[k - 1 + K] = phi_m_inv(orbit.m_at(k), b[k + K])
    return b


def validate_slopes(slopes: SlopeSeq, orbit: OrbitTable, tol: float = 1e-12) -> list:
    """Return a list of human-readable violations (empty when valid)."""
    K = slopes.K
    errs = []
    a = orbit.alpha
    for side, b in (("L", slopes.beta_L), ("R", slopes.beta_R)):
        if not np.all(b > 0):
            errs.append(f"beta^{side} not positive at k={int(np.argmin(b)) - K}")
        fwd = b[K:] <= a[K:]
        if fwd.any():
            errs.append(f"beta_k^{side} > alpha_k violated at k={int(np.flatnonzero(fwd)[0])}")
        bwd = b[:K] >= a[:K]
        if bwd.any():
            errs.append(f"beta_k^{side} < alpha_k violated at k={int(np.flatnonzero(bwd)[-1]) - K}")
        bal = b[1:] + 1.0 / b[:-1]
        ks = np.arange(-K + 1, K + 1)
        target = np.where(ks == 0, slopes.m_tilde0, orbit.m[1:])
        bad = np.abs(bal - target) > tol * np.maximum(1.0, np.abs(target))
        if bad.any():
            errs.append(f"balance identity violated for side {side} at k={int(ks[bad][0])}")
    if slopes.beta_L[K] == slopes.beta_R[K]:
        errs.append("beta_0^R != beta_0^L violated")
    if not slopes.m_tilde0 > orbit.m_at(0):
        errs.append("m~_0 > m_0 violated")
    return errs


def seed_slopes(orbit: OrbitTable, dL: float = 0.2, dR: float = 0.1, fL: float = 0.9) -> SlopeSeq:
    """Seed beta_0^L, beta_0^R, beta_{-1}^L, solve beta_{-1}^R, then iterate Phi."""
    if not (dL > 0 and dR > 0):
        raise SeedInfeasible("offsets dL, dR must be > 0")
    if dL == dR:
        raise SeedInfeasible("beta_0^R != beta_0^L violated (dL == dR)")
    if not 0 < fL < 1:
        raise SeedInfeasible("fL must lie in (0, 1)")
    a0, am1 = orbit.alpha_at(0), orbit.alpha_at(-1)
    b0L, b0R = a0 + dL, a0 + dR
    bm1L = fL * am1
    denom = b0L + 1.0 / bm1L - b0R
    if not denom > 0:
        raise SeedInfeasible(f"beta_-1^R has no positive solution (denominator {denom:.6g})")
    bm1R = 1.0 / denom
    if not 0 < bm1R < am1:
        raise SeedInfeasible(f"beta_-1^R = {bm1R:.6g} outside (0, alpha_-1 = {am1:.6g})")
    try:
        bL = _fill(orbit, b0L, bm1L)
        bR = _fill(orbit, b0R, bm1R)
    except DomainError as exc:
        raise SeedInfeasible(f"slope recursion left its domain: {exc}") from exc
    slopes = SlopeSeq(orbit.K, bL, bR, b0L + 1.0 / bm1L)
    errs = validate_slopes(slopes, orbit)
    if errs:
        raise SeedInfeasible("; ".join(errs))
    return slopes


# -- surgery ---------------------------------------------------------------


@dataclass
class SurgeryProfile:
    """Modified derivative on one half-gap, in gap-local units.

    ``correction`` is the integral of (ramp - g') over the ramp; the bump
    on [bump_lo, bump_hi] removes (L) or adds back (R) exactly that mass.
    """

    k: int
    side: str
    eps: float
    bump_lo: float
    bump_hi: float
    correction: float
    beta: float
    sup_dev: float = 0.0  # sup |delta - 1| over the half-gap
    bound: float = 0.0  # allowed sup |delta - 1|

    def to_dict(self) -> dict:
        return asdict(self)


class _Gap:
    """Closed-form G, G' for a single gap (scalars)."""

    def __init__(self, k: int, table: GapTable, spec: BumpSpec):
        self.lk = float(table.gap_length(k))
        self.lk1 = float(table.gap_length(k + 1))
        self.spec = spec

    def G(self, u):
        return u + (self.lk1 - self.lk) * eta_antiderivative(np.asarray(u) / self.lk, self.spec)

    def dG(self, u):
        return 1.0 + (self.lk1 / self.lk - 1.0) * eta(np.asarray(u) / self.lk, self.spec)


def _delta_samples(prof: SurgeryProfile, gap: _Gap, uk: float, spec: BumpSpec, n: int = 1025):
    """delta across the bump and at both ramp ends (elsewhere delta = g')."""
    lo, hi = prof.bump_lo, prof.bump_hi
    s = np.linspace(0.0, 1.0, n)
    bump_vals = gap.dG(lo + s * (hi - lo)) - prof.correction * unit_bump(s, spec) / (hi - lo)
    far = uk - prof.eps if prof.side == "L" else uk + prof.eps
    ramp_vals = np.array([float(gap.dG(far)), prof.beta])
    return bump_vals, ramp_vals


def build_surgery(
    k: int,
    side: str,
    slopes: SlopeSeq,
    orbit: OrbitTable,
    table: GapTable,
    spec: BumpSpec = BumpSpec(),
    init_fraction: float = 0.5,
) -> SurgeryProfile:
    """Ramp to beta_k^side at x_k, compensate the integral with a bump.

    The ramp width starts at ``init_fraction`` of the half-gap and is halved
    until delta > 0 and sup|delta - 1| <= max(sup|g' - 1|, |beta - 1|) + 1/(1+|k|).
    """
    if side not in ("L", "R"):
        raise ValueError("side must be 'L' or 'R'")
    gap = _Gap(k, table, spec)
    lk = gap.lk
    uk = orbit.u_at(k)
    beta = slopes.beta(k, side)
    half = uk if side == "L" else lk - uk
    if not half > 0:
        raise SurgeryInfeasible(f"half-gap ({k}, {side}) has no length")
    r1 = gap.lk1 / lk - 1.0
    if side == "L":
        t_peak = min(uk / lk, 0.5)
        free_lo, free_hi = OUTER * lk, None
    else:
        t_peak = max(uk / lk, 0.5)
        free_lo, free_hi = None, (1.0 - OUTER) * lk
    gsup = abs(r1) * float(eta(t_peak, spec))
    bound = max(gsup, abs(beta - 1.0)) + 1.0 / (1.0 + abs(k))

    eps = init_fraction * half
    last = None
    for _ in range(MAX_HALVINGS + 1):
        if side == "L":
            s0 = uk - eps
            region = (free_lo, s0)
            d0 = float(gap.dG(s0))
            corr = eps * (d0 + beta) / 2.0 - (float(gap.G(uk)) - float(gap.G(s0)))
        else:
            s1 = uk + eps
            region = (s1, free_hi)
            d1 = float(gap.dG(s1))
            corr = eps * (beta + d1) / 2.0 - (float(gap.G(s1)) - float(gap.G(uk)))
        width = region[1] - region[0]
        if width > 0:
            pad = 0.5 * (1.0 - BUMP_FILL) * width
            prof = SurgeryProfile(k, side, eps, region[0] + pad, region[1] - pad, corr, beta, bound=bound)
            bump_vals, ramp_vals = _delta_samples(prof, gap, uk, spec)
            vals = np.concatenate([bump_vals, ramp_vals])
            prof.sup_dev = float(max(np.max(np.abs(vals - 1.0)), gsup))
            last = prof
            if np.all(vals > 0) and prof.sup_dev <= bound:
                return prof
        eps *= 0.5
    detail = f"sup|delta-1|={last.sup_dev:.6g}" if last else "no room for the correction bump"
    raise SurgeryInfeasible(
        f"half-gap k={k} side={side}: {detail}, bound={bound:.6g} after {MAX_HALVINGS} halvings"
    )


def build_all_surgery(slopes, orbit, table, spec=BumpSpec(), init_fraction=0.5) -> list:
    out = []
    for k in range(-orbit.K, orbit.K + 1):
        for side in ("L", "R"):
            out.append(build_surgery(k, side, slopes, orbit, table, spec, init_fraction))
    return out


class ModifiedMap(DenjoyMap):
    """The homeomorphism h: g with its derivative rebuilt on |k| <= K gaps."""

    def __init__(self, table: GapTable, spec: BumpSpec, orbit: OrbitTable, profiles: list):
        super().__init__(table, spec)
        self.orbit = orbit
        K = self.K = orbit.K
        n = 2 * K + 1
        self.uk = orbit.u.copy()
        P = {(p.k, p.side): p for p in profiles}
        if len(P) != 2 * n:
            raise ValueError("need one surgery profile per half-gap |k| <= K_orbit")
        ks = np.arange(-K, K + 1)
        self.profiles = profiles

        def col(side, name):
            return np.array([getattr(P[(k, side)], name) for k in ks], dtype=float)

        self.epsL, self.epsR = col("L", "eps"), col("R", "eps")
        self.bL0, self.bL1 = col("L", "bump_lo"), col("L", "bump_hi")
        self.bR0, self.bR1 = col("R", "bump_lo"), col("R", "bump_hi")
        self.cL, self.cR = col("L", "correction"), col("R", "correction")
        self.betaL, self.betaR = col("L", "beta"), col("R", "beta")
        ku = ks
        s0 = self.uk - self.epsL
        s1 = self.uk + self.epsR
        G = super().local_forward
        dG = super().local_derivative
        self.s0, self.s1 = s0, s1
        self.G_s0, self.G_uk, self.G_s1 = G(ku, s0), G(ku, self.uk), G(ku, s1)
        self.d0, self.d1 = dG(ku, s0), dG(ku, s1)
        self.aL = (self.betaL - self.d0) / self.epsL
        self.aR = (self.d1 - self.betaR) / self.epsR
        self.xk = table.starts[table.rank_of[ks + table.N]] + self.uk

    def _surgered(self, k):
        return np.abs(k) <= self.K

    def local_forward(self, k, u):
        k = np.asarray(k)
        u = np.asarray(u, dtype=float)
        out = np.asarray(super().local_forward(k, u), dtype=float).copy()
        m = self._surgered(k)
        if m.any():
            out[m] = self._h_local(k[m] + self.K, u[m], out[m])
        return out

    def _h_local(self, i, u, G):
        uk = self.uk[i]
        out = np.empty_like(u)
        left = u <= uk
        # left half: G - cL * B before the ramp, quadratic on the ramp
        s0 = self.s0[i]
        B = unit_bump_cdf((u - self.bL0[i]) / (self.bL1[i] - self.bL0[i]), self.spec)
        t = u - s0
        ramp = self.G_s0[i] - self.cL[i] + t * (self.d0[i] + 0.5 * self.aL[i] * t)
        out = np.where(left & (u < s0), G - self.cL[i] * B, out)
        out = np.where(left & (u >= s0), ramp, out)
        # right half: quadratic on the ramp, then G + cR * (1 - B)
        s1 = self.s1[i]
        t = u - uk
        ramp = self.G_uk[i] + t * (self.betaR[i] + 0.5 * self.aR[i] * t)
        B = unit_bump_cdf((u - self.bR0[i]) / (self.bR1[i] - self.bR0[i]), self.spec)
        out = np.where(~left & (u <= s1), ramp, out)
        out = np.where(~left & (u > s1), G + self.cR[i] * (1.0 - B), out)
        return out

    def local_derivative(self, k, u, side=None):
        k = np.asarray(k)
        u = np.asarray(u, dtype=float)
        out = np.asarray(super().local_derivative(k, u), dtype=float).copy()
        m = self._surgered(k)
        if m.any():
            out[m] = self._delta_local(k[m] + self.K, u[m], out[m], side)
        return out

    def _delta_local(self, i, u, dG, side):
        uk = self.uk[i]
        tol = 4.0 * np.spacing(self.xk[i])
        at_x = np.abs(u - uk) <= tol
        if side == "R":
            left = u < uk - tol
        else:
            left = u <= uk + tol if side == "L" else u <= uk
        wL = self.bL1[i] - self.bL0[i]
        wR = self.bR1[i] - self.bR0[i]
        bL = unit_bump((u - self.bL0[i]) / wL, self.spec) / wL
        bR = unit_bump((u - self.bR0[i]) / wR, self.spec) / wR
        out = np.where(
            left,
            np.where(u < self.s0[i], dG - self.cL[i] * bL, self.d0[i] + self.aL[i] * (u - self.s0[i])),
            np.where(u <= self.s1[i], self.betaR[i] + self.aR[i] * (u - uk), dG - self.cR[i] * bR),
        )
        if side == "L":
            out = np.where(at_x, self.betaL[i], out)
        elif side == "R":
            out = np.where(at_x, self.betaR[i], out)
        return out

    def onesided_derivative(self, x, side):
        return self.derivative(x, side)
