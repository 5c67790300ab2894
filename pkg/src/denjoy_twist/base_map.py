"""The C^1 Denjoy diffeomorphism g and the marked orbit x_k = g^k(x_0).

On a stored gap I_k, in local coordinate u = x - a_k, g is

    G_k(u) = u + (l_{k+1} - l_k) * E(u / l_k),

where E is the antiderivative of the polynomial bump eta. Off the stored
gaps g maps each complementary arc linearly onto its image arc.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .circle import wrap
from .denjoy import GapTable
from .errors import ConstructionError, OrbitBeyondTable

SUPPORT_LO, SUPPORT_HI = 0.25, 0.75


@dataclass(frozen=True)
class BumpSpec:
    """eta(t) = c * (s(1-s))^p with s = 2(t - 1/4) on [1/4, 3/4], zero elsewhere."""

    p: int = 3

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 2:
            raise ValueError("bump exponent p must be an integer >= 2")

    @property
    def c(self) -> float:
        p = self.p
        return float(2 * math.factorial(2 * p + 1) // math.factorial(p) ** 2)

    @property
    def eta_max(self) -> float:
        return self.c / 4.0**self.p

    @property
    def smoothstep_coefficients(self) -> tuple:
        # E(1/4 + s/2) = s^(p+1) * sum_j coef_j s^j ; all coef_j are integers
        p = self.p
        half_c = Fraction(math.factorial(2 * p + 1), math.factorial(p) ** 2)
        return tuple(
            float(half_c * math.comb(p, j) * (-1) ** j / (p + j + 1)) for j in range(p + 1)
        )


def _smoothstep(s, spec: BumpSpec):
    """Regularized incomplete beta I_s(p+1, p+1) for s in [0, 1]."""
    coef = spec.smoothstep_coefficients
    acc = np.zeros_like(s) + coef[-1]
    for c in coef[-2::-1]:
        acc = acc * s + c
    return acc * s ** (spec.p + 1)


def eta(t, spec: BumpSpec = BumpSpec()):
    t = np.asarray(t, dtype=float)
    s = np.clip(2.0 * (t - SUPPORT_LO), 0.0, 1.0)
    out = spec.c * (s * (1.0 - s)) ** spec.p
    out = np.where((t > SUPPORT_LO) & (t < SUPPORT_HI), out, 0.0)
    return float(out) if out.ndim == 0 else out


def eta_antiderivative(t, spec: BumpSpec = BumpSpec()):
    """E(t) = int_0^t eta. Exactly 0 below 1/4, exactly 1 above 3/4."""
    t = np.asarray(t, dtype=float)
    s = np.clip(2.0 * (t - SUPPORT_LO), 0.0, 1.0)
    lower = s <= 0.5
    # evaluate on the short side and reflect, so E(1/2 + x) = 1 - E(1/2 - x)
    sm = np.where(lower, s, 1.0 - s)
    val = _smoothstep(sm, spec)
    out = np.where(lower, val, 1.0 - val)
    return float(out) if out.ndim == 0 else out


def unit_bump(s, spec: BumpSpec = BumpSpec()):
    """Unit-mass bump on [0, 1] built from eta: b(s) = eta(1/4 + s/2) / 2."""
    return 0.5 * eta(SUPPORT_LO + 0.5 * np.asarray(s, dtype=float), spec)


def unit_bump_cdf(s, spec: BumpSpec = BumpSpec()):
    return eta_antiderivative(SUPPORT_LO + 0.5 * np.asarray(s, dtype=float), spec)


# -- per-gap model maps --------------------------------------------------


def gap_forward(k: int, u, table: GapTable, spec: BumpSpec = BumpSpec()):
    """G_k(u): the model diffeomorphism [0, l_k] -> [0, l_{k+1}]."""
    if not (table.stored(k) and table.stored(k + 1)):
        raise OrbitBeyondTable(f"gap {k + 1} is not stored (N={table.N})")
    lk = float(table.gap_length(k))
    lk1 = float(table.gap_length(k + 1))
    return u + (lk1 - lk) * eta_antiderivative(np.asarray(u) / lk, spec)


def _newton_bracketed(f, df, target, lo, hi, x0, max_iter=200):
    """Vectorized safeguarded Newton for increasing f on [lo, hi].

    Iterates until the Newton step falls below a few ulps of the bracket
    scale, falling back to bisection whenever a step leaves the bracket.
    """
    x = np.clip(x0, lo, hi)
    lo = lo.copy()
    hi = hi.copy()
    tol = 4.0 * np.spacing(np.maximum(np.abs(hi), np.abs(lo)))
    active = np.ones(x.shape, dtype=bool)
    for _ in range(max_iter):
        if not active.any():
            break
        xa = x[active]
        fx = f(xa, active) - target[active]
        lo[active] = np.where(fx <= 0, xa, lo[active])
        hi[active] = np.where(fx >= 0, xa, hi[active])
        d = df(xa, active)
        step = np.where(d > 0, fx / np.where(d > 0, d, 1.0), np.inf)
        xn = xa - step
        outside = ~((xn >= lo[active]) & (xn <= hi[active])) | ~np.isfinite(xn)
        xn = np.where(outside, 0.5 * (lo[active] + hi[active]), xn)
        done = (np.abs(xn - xa) <= tol[active]) | (fx == 0)
        x[active] = np.where(fx == 0, xa, xn)
        idx = np.flatnonzero(active)
        active[idx[done]] = False
    return x


class DenjoyMap:
    """Evaluation of g, g', g^{-1} on the implemented truncated Denjoy map.

    Stored gap I_k (k < N) goes onto I_{k+1} by G_k.  Everything else is
    grouped into complementary arcs bounded by the stored gaps -N..N-1 and
    mapped linearly onto the arcs bounded by gaps -N+1..N.
    """

    def __init__(self, table: GapTable, spec: BumpSpec = BumpSpec()):
        self.table = table
        self.spec = spec
        self._build_arc_maps()

    # -- complementary arcs --------------------------------------------

    def _build_arc_maps(self):
        t = self.table
        M, N = t.size, t.N
        r = np.arange(M)
        ks = t.ks
        rN = t.rank_of[2 * N]
        rmN = t.rank_of[0]

        # forward: source arcs bounded by gaps other than N
        iL = np.where(ks == N, r - 1, r)
        iR = np.where(ks[(r + 1) % M] == N, r + 2, r + 1)
        S0 = np.where(iL < 0, t.ends[iL % M] - 1.0, t.ends[iL % M])
        S1 = t.starts[iR % M] + (iR >= M)
        kL, kR = ks[iL % M] + 1, ks[iR % M] + 1
        T0 = t.ends[t.rank_of[kL + N]]
        T1 = t.starts[t.rank_of[kR + N]]
        T1 = T1 + (T1 <= T0)
        self._fwd = (S0, S1, T0, T1)
        self._fwd_gapN = rN

        # inverse: image arcs bounded by gaps other than -N
        jL = np.where(ks == -N, r - 1, r)
        jR = np.where(ks[(r + 1) % M] == -N, r + 2, r + 1)
        Y0 = np.where(jL < 0, t.ends[jL % M] - 1.0, t.ends[jL % M])
        Y1 = t.starts[jR % M] + (jR >= M)
        pL, pR = ks[jL % M] - 1, ks[jR % M] - 1
        X0 = t.ends[t.rank_of[pL + N]]
        X1 = t.starts[t.rank_of[pR + N]]
        X1 = X1 + (X1 <= X0)
        self._inv = (Y0, Y1, X0, X1)
        self._inv_gapmN = rmN

    def arc_slopes(self) -> np.ndarray:
        """Slope of g on the complementary arc after each stored gap rank."""
        S0, S1, T0, T1 = self._fwd
        return (T1 - T0) / (S1 - S0)

    # -- gap-local model (overridden for the surgered map) -------------

    def local_forward(self, k, u):
        lk = self.table.gap_length(k)
        lk1 = self.table.gap_length(k + 1)
        return u + (lk1 - lk) * eta_antiderivative(u / lk, self.spec)

    def local_derivative(self, k, u, side=None):
        lk = self.table.gap_length(k)
        lk1 = self.table.gap_length(k + 1)
        return 1.0 + (lk1 / lk - 1.0) * eta(u / lk, self.spec)

    def local_inverse(self, k, v):
        """Solve local_forward(k, u) = v for u in [0, l_k]."""
        k = np.asarray(k)
        lk = self.table.gap_length(k)
        lk1 = self.table.gap_length(k + 1)

        def f(u, m):
            return self.local_forward(k[m], u)

        def df(u, m):
            return self.local_derivative(k[m], u)

        return _newton_bracketed(f, df, v, np.zeros_like(lk), lk.astype(float), v * lk / lk1)

    # -- circle-level evaluation ---------------------------------------

    def forward(self, x):
        scalar = np.ndim(x) == 0
        x = wrap(np.atleast_1d(np.asarray(x, dtype=float)))
        t = self.table
        N = t.N
        r, in_gap, u = t.locate_many(x)
        k = t.ks[r]
        out = np.empty_like(x)
        g = in_gap & (k != N)
        if g.any():
            kg = k[g]
            out[g] = t.starts[t.rank_of[kg + 1 + N]] + self.local_forward(kg, u[g])
        c = ~g
        if c.any():
            rc = np.where(in_gap[c], self._fwd_gapN, r[c])
            S0, S1, T0, T1 = (a[rc] for a in self._fwd)
            xl = x[c]
            out[c] = T0 + (xl - S0) * ((T1 - T0) / (S1 - S0))
        out = wrap(out)
        return float(out[0]) if scalar else out

    def derivative(self, x, side=None):
        """Derivative of the map; ``side`` in {'L', 'R'} selects a one-sided value."""
        scalar = np.ndim(x) == 0
        x = wrap(np.atleast_1d(np.asarray(x, dtype=float)))
        t = self.table
        r, in_gap, u = t.locate_many(x)
        k = t.ks[r]
        out = np.empty_like(x)
        g = in_gap & (k != t.N)
        if g.any():
            out[g] = self.local_derivative(k[g], u[g], side)
        c = ~g
        if c.any():
            rc = np.where(in_gap[c], self._fwd_gapN, r[c])
            S0, S1, T0, T1 = (a[rc] for a in self._fwd)
            out[c] = (T1 - T0) / (S1 - S0)
        return float(out[0]) if scalar else out

    def inverse(self, y):
        scalar = np.ndim(y) == 0
        y = wrap(np.atleast_1d(np.asarray(y, dtype=float)))
        t = self.table
        N = t.N
        r, in_gap, v = t.locate_many(y)
        k = t.ks[r]
        out = np.empty_like(y)
        g = in_gap & (k != -N)
        if g.any():
            kp = k[g] - 1
            out[g] = t.starts[t.rank_of[kp + N]] + self.local_inverse(kp, v[g])
        c = ~g
        if c.any():
            rc = np.where(in_gap[c], self._inv_gapmN, r[c])
            Y0, Y1, X0, X1 = (a[rc] for a in self._inv)
            out[c] = X0 + (y[c] - Y0) * ((X1 - X0) / (Y1 - Y0))
        out = wrap(out)
        return float(out[0]) if scalar else out

    # -- lifts pinned by lift(0) in [0, 1) -----------------------------

    @property
    def _lift_cut(self) -> float:
        # the preimage of 0 = a_0 is a_{-1}; past it the lift exceeds 1
        return self.table.start(-1)

    def lift(self, x):
        """Lift on [0, 1): continuous, increasing, lift(0) = map(0) = a_1."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(self.forward(x))
        y0 = self.table.start(1)
        bump = (x >= self._lift_cut) | (y < 0.5 * y0)
        out = y + bump
        return float(out) if out.ndim == 0 else out

    def lift_inverse(self, theta):
        """Inverse of ``lift`` composed with the unit translation, on [0, 1)."""
        theta = np.asarray(theta, dtype=float)
        x = np.asarray(self.inverse(theta))
        out = x - (x >= self._lift_cut)
        return float(out) if out.ndim == 0 else out

    def displacement(self, x):
        """lift(x) - x, the continuous displacement function."""
        return self.lift(x) - np.asarray(x, dtype=float)


def g_eval(x, table: GapTable, spec: BumpSpec = BumpSpec()):
    return DenjoyMap(table, spec).forward(x)


def g_prime(x, table: GapTable, spec: BumpSpec = BumpSpec()):
    return DenjoyMap(table, spec).derivative(x)


def g_inverse(y, table: GapTable, spec: BumpSpec = BumpSpec()):
    return DenjoyMap(table, spec).inverse(y)


# -- marked orbit --------------------------------------------------------


@dataclass
class OrbitTable:
    """x_k = g^k(x_0) for |k| <= K, stored in gap-local coordinates."""

    K: int
    u: np.ndarray  # index k + K
    alpha: np.ndarray  # g'(x_k)
    m: np.ndarray  # alpha_k + 1/alpha_{k-1}
    x0_fraction: float

    def index(self, k) -> np.ndarray:
        return np.asarray(k) + self.K

    def ks(self) -> np.ndarray:
        return np.arange(-self.K, self.K + 1)

    def alpha_at(self, k) -> float:
        return float(self.alpha[k + self.K])

    def m_at(self, k) -> float:
        return float(self.m[k + self.K])

    def u_at(self, k) -> float:
        return float(self.u[k + self.K])

    def position(self, k, table: GapTable) -> float:
        return float(table.start(k) + self.u[k + self.K])

    def to_dict(self) -> dict:
        return {
            "K_orbit": self.K,
            "x0_fraction": self.x0_fraction,
            "entries": [
                {"k": k, "u": u, "alpha": a, "m": m}
                for k, u, a, m in zip(
                    range(-self.K, self.K + 1), self.u.tolist(), self.alpha.tolist(), self.m.tolist()
                )
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "OrbitTable":
        e = sorted(d["entries"], key=lambda r: r["k"])
        return cls(
            K=int(d["K_orbit"]),
            u=np.array([r["u"] for r in e]),
            alpha=np.array([r["alpha"] for r in e]),
            m=np.array([r["m"] for r in e]),
            x0_fraction=float(d["x0_fraction"]),
        )


def build_orbit(x0_fraction: float, K_orbit: int, table: GapTable, spec: BumpSpec = BumpSpec()) -> OrbitTable:
    """Propagate x_0 = a_0 + x0_fraction * l_0 through the per-gap model maps.

    Forward steps use the closed form G_k; backward steps invert G_{k-1}.
    One extra backward step provides alpha_{-K-1}, needed for m_{-K}.
    """
    if not 0.0 < x0_fraction < 1.0:
        raise ConstructionError("x0_fraction must lie in (0, 1)")
    if K_orbit < 1 or K_orbit + 1 > table.N:
        raise ConstructionError(
            f"orbit radius {K_orbit} needs K_orbit + 1 <= N = {table.N}"
        )
    K = K_orbit
    g = DenjoyMap(table, spec)
    u = np.empty(2 * K + 3)  # k = -K-1 .. K+1, index k + K + 1
    u[K + 1] = x0_fraction * float(table.gap_length(0))
    for k in range(0, K + 1):
        u[k + K + 2] = float(gap_forward(k, u[k + K + 1], table, spec))
    for k in range(0, -K - 1, -1):
        v = np.array([u[k + K + 1]])
        u[k + K] = float(g.local_inverse(np.array([k - 1]), v)[0])
    ks = np.arange(-K - 1, K + 2)
    lk = table.gap_length(ks)
    ratio = table.gap_length(np.minimum(ks + 1, table.N)) / lk
    alpha = 1.0 + (ratio - 1.0) * eta(u / lk, spec)
    m = alpha[1:-1] + 1.0 / alpha[:-2]
    return OrbitTable(K=K, u=u[1:-1].copy(), alpha=alpha[1:-1].copy(), m=m, x0_fraction=x0_fraction)
