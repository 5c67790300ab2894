"""The twist map f_phi(theta, r) = (theta + r, r + phi(theta + r)).

With h = Id + psi an orientation preserving circle homeomorphism and
phi = h~ + h~^{-1} - 2 Id, the graph of psi is invariant under f_phi and
f restricted to it is h.
"""

from __future__ import annotations

import math

import numpy as np

from .base_map import DenjoyMap, eta_antiderivative
from .circle import signed_gap, wrap

# Gauss-Legendre nodes on [0, 1]; exact for the degree-7 pieces of h
_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


class TwistSystem:
    """phi, psi and f_phi assembled from a circle homeomorphism ``h``."""

    def __init__(self, h: DenjoyMap, g: DenjoyMap | None = None):
        self.h = h
        self.g = g
        self._integral = None

    # -- curve and kick --------------------------------------------------

    def psi(self, theta):
        theta = wrap(theta)
        return self.h.lift(theta) - theta

    def phi(self, theta):
        theta = wrap(theta)
        return self.h.lift(theta) + self.h.lift_inverse(theta) - 2.0 * np.asarray(theta)

    def chi(self, theta):
        """Kick built from the unmodified Denjoy map g, for comparison."""
        theta = wrap(theta)
        return self.g.lift(theta) + self.g.lift_inverse(theta) - 2.0 * np.asarray(theta)

    # -- dynamics ---------------------------------------------------------

    def f_apply(self, theta, r):
        s = np.add(theta, r)
        return wrap(s), np.add(r, self.phi(wrap(s)))

    def f_inverse(self, theta, r):
        r0 = np.subtract(r, self.phi(theta))
        return wrap(np.subtract(theta, r0)), r0

    def invariance_residual(self, theta, psi_offset=0.0):
        """|signed gap| + |dr| between f(theta, psi(theta)) and (h(theta), psi(h(theta))).

        ``psi_offset`` shifts the tested curve vertically (negative control).
        """
        theta = wrap(theta)
        t1, r1 = self.f_apply(theta, self.psi(theta) + psi_offset)
        ht = self.h.forward(theta)
        return np.abs(signed_gap(t1, ht)) + np.abs(r1 - self.psi(ht) - psi_offset)

    def restriction_defect(self, theta):
        """|signed gap| between the first coordinate of f on the curve and h."""
        theta = wrap(theta)
        t1, _ = self.f_apply(theta, self.psi(theta))
        return np.abs(signed_gap(t1, self.h.forward(theta)))

    def jacobian_check(self, theta, r, step=1e-6, side=None):
        """Finite-difference Jacobian of f; returns (det, d theta'/d r).

        ``side`` = 'L' or 'R' uses one-sided differences toward that side,
        for points where phi has only one-sided derivatives.
        """
        if not 1e-8 <= step <= 1e-4:
            raise ValueError("step must lie in [1e-8, 1e-4]")
        if side is None:
            lo, hi = -step, step
        elif side == "R":
            lo, hi = 0.0, step
        else:
            lo, hi = -step, 0.0
        span = hi - lo

        def col(dt, dr):
            ta, ra = self.f_apply(theta + dt * lo, r + dr * lo)
            tb, rb = self.f_apply(theta + dt * hi, r + dr * hi)
            return signed_gap(tb, ta) / span, (rb - ra) / span

        a11, a21 = col(1.0, 0.0)
        a12, a22 = col(0.0, 1.0)
        return a11 * a22 - a12 * a21, a12

    # -- zero mean ---------------------------------------------------------

    def integral_phi(self) -> float:
        """Gap-aware quadrature of phi over the circle.

        int phi = int (h~ - Id) + int (h~^{-1} - Id).  Each term is integrated
        by Gauss-Legendre on the pieces where it is smooth: stored gaps split
        at the bump support and surgery breakpoints, and the linear
        complementary arcs.  The second term uses pieces of the image side.
        """
        fwd, inv = self.integral_parts()
        return fwd + inv

    def integral_parts(self) -> tuple:
        """(int (h~ - Id), int (h~^{-1} - Id)), cached."""
        if self._integral is None:
            fwd = self._integrate(self._forward_pieces(), self.h.lift)
            inv = self._integrate(self._inverse_pieces(), self.h.lift_inverse)
            self._integral = (fwd, inv)
        return self._integral

    def _integrate(self, pieces, lift):
        lo, hi = pieces
        w = hi - lo
        nodes = lo[:, None] + w[:, None] * _GL_X[None, :]
        vals = np.empty_like(nodes)
        for j in range(nodes.shape[1]):
            x = nodes[:, j]
            # lifts are defined on [0, 1); pieces never straddle 0
            vals[:, j] = lift(x) - x
        per_piece = (vals * _GL_W[None, :]).sum(axis=1) * w
        return math.fsum(per_piece.tolist())

    def _gap_breaks(self):
        """Local breakpoints of the gap-local map, per stored gap (rank order)."""
        t = self.h.table
        lk = t.lengths
        fr = np.array([0.0, 0.25, 0.75, 1.0])
        brk = [lk[:, None] * fr[None, :]]
        K = getattr(self.h, "K", None)
        if K is not None:
            extra = np.full((t.size, 7), np.nan)
            ks = np.arange(-K, K + 1)
            r = t.rank_of[ks + t.N]
            h = self.h
            extra[r] = np.stack(
                [h.bL0, h.bL1, h.s0, h.uk, h.s1, h.bR0, h.bR1], axis=1
            )
            brk.append(extra)
        return np.concatenate(brk, axis=1)

    def _forward_pieces(self):
        t = self.h.table
        brk = self._gap_breaks()
        lo, hi = self._split(t.starts, brk)
        # complementary arcs, with the wrap-around arc split at 1
        rlo, rhi = t.ends, t.next_starts
        return self._concat_pieces(lo, hi, rlo, rhi)

    def _inverse_pieces(self):
        t = self.h.table
        N = t.N
        brk = self._gap_breaks()
        # image of gap k (k < N) is gap k+1; map the breakpoints through h
        ks = t.ks
        src = ks < N
        img_rank = t.rank_of[ks[src] + 1 + N]
        local = brk[src]
        kk = np.repeat(ks[src][:, None], local.shape[1], axis=1)
        flat = local.ravel()
        ok = np.isfinite(flat)
        mapped = np.full(flat.shape, np.nan)
        mapped[ok] = self.h.local_forward(kk.ravel()[ok], flat[ok])
        mapped = mapped.reshape(local.shape)
        img = np.full((t.size, local.shape[1]), np.nan)
        img[img_rank] = mapped
        # gap -N is inside a linear arc of the inverse map
        rmN = t.rank_of[0]
        img[rmN, :] = np.nan
        img[rmN, 0] = 0.0
        img[rmN, 1] = t.lengths[rmN]
        img[:, 0] = 0.0
        img[:, -1] = np.where(np.isnan(img[:, -1]), t.lengths, img[:, -1])
        lo, hi = self._split(t.starts, np.concatenate([img, t.lengths[:, None]], axis=1))
        return self._concat_pieces(lo, hi, t.ends, t.next_starts)

    @staticmethod
    def _split(starts, brk):
        b = np.sort(brk, axis=1)  # NaNs sort last
        lo_l = b[:, :-1]
        hi_l = b[:, 1:]
        ok = np.isfinite(lo_l) & np.isfinite(hi_l) & (hi_l > lo_l)
        lo = (starts[:, None] + lo_l)[ok]
        hi = (starts[:, None] + hi_l)[ok]
        return lo, hi

    @staticmethod
    def _concat_pieces(lo, hi, rlo, rhi):
        wrapped = rhi > 1.0
        rlo2 = np.concatenate([rlo[~wrapped], rlo[wrapped], np.zeros(wrapped.sum())])
        rhi2 = np.concatenate([rhi[~wrapped], np.ones(wrapped.sum()), rhi[wrapped] - 1.0])
        keep = rhi2 > rlo2
        return np.concatenate([lo, rlo2[keep]]), np.concatenate([hi, rhi2[keep]])
