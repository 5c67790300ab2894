"""Gap lengths, their placement on the circle, and the semi-conjugacy.

The circle is cut into 2N+1 stored wandering gaps I_k = [a_k, a_k + l_k),
placed in the circular order of frac(k*alpha), and 2N+1 residual arcs
between consecutive gaps that carry the mass of the unstored gaps.
"""

from __future__ import annotations

import bisect
import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np

from .circle import rotation_positions, wrap
from .errors import ConstructionError

log = logging.getLogger(__name__)

FAMILY_KINDS = ("quadratic", "paper_log")


@dataclass(frozen=True)
class LengthFamily:
    kind: str = "quadratic"
    C: float = 100.0
    delta: float = 1.0

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown length family {self.kind!r}")
        if not self.C > 1:
            raise ValueError("C must be > 1")
        if self.kind == "paper_log" and not self.delta > 0:
            raise ValueError("delta must be > 0")

    def density(self, k):
        """Unnormalized length of gap ``k`` (even in k)."""
        x = np.abs(np.asarray(k, dtype=float)) + self.C
        if self.kind == "quadratic":
            out = 1.0 / (x * x)
        else:
            out = 1.0 / (x * np.log(x) ** (1.0 + self.delta))
        return float(out) if np.ndim(out) == 0 else out

    def tail_majorant(self, N_sum: int) -> float:
        """Upper bound on sum_{|k| > N_sum} density(k) by the integral test."""
        x = N_sum + self.C
        if self.kind == "quadratic":
            return 2.0 / x
        return 2.0 / (self.delta * math.log(x) ** self.delta)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "C": self.C, "delta": self.delta}


def length(k, family: LengthFamily, a_C: float):
    return a_C * family.density(k)


def normalize(family: LengthFamily, N_sum: int) -> float:
    """a_C making the stored lengths plus the analytic tail bound sum to 1."""
    if N_sum < 0:
        raise ValueError("N_sum must be non-negative")
    dens = family.density(np.arange(1, N_sum + 1))
    partial = math.fsum([family.density(0), 2.0 * math.fsum(dens)])
    return 1.0 / (partial + family.tail_majorant(N_sum))


def twist_gate(family: LengthFamily, N: int, eta_max: float) -> float:
    """max over stored k of |l_{k+1}/l_k - 1| * eta_max (must be < 1)."""
    k = np.arange(-N, N)
    ratios = family.density(k + 1) / family.density(k)
    return float(np.max(np.abs(ratios - 1.0)) * eta_max)


class GapHit(NamedTuple):
    k: int
    u: float


class ResidualHit(NamedTuple):
    left_rank: int
    s: float


Hit = Union[GapHit, ResidualHit]


@dataclass
class GapTable:
    """Stored gaps in rank (circular) order.

    ``ks[r]``, ``starts[r]``, ``lengths[r]`` describe the gap of rank r;
    ``rank_of[k + N]`` inverts ``ks``.  Residual arc r runs from the end of
    gap r to the start of gap r+1 (the last one ends at 1.0).
    """

    alpha: float
    family: LengthFamily
    N: int
    a_C: float
    tail_bound: float
    ks: np.ndarray
    starts: np.ndarray
    lengths: np.ndarray
    rank_of: np.ndarray = field(init=False, repr=False)
    ends: np.ndarray = field(init=False, repr=False)
    next_starts: np.ndarray = field(init=False, repr=False)
    rot_pos: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.ks = np.asarray(self.ks, dtype=np.int64)
        self.starts = np.asarray(self.starts, dtype=float)
        self.lengths = np.asarray(self.lengths, dtype=float)
        M = 2 * self.N + 1
        if self.ks.shape != (M,) or self.starts.shape != (M,):
            raise ConstructionError("gap arrays must have 2N+1 entries")
        self.rank_of = np.empty(M, dtype=np.int64)
        self.rank_of[self.ks + self.N] = np.arange(M)
        self.ends = self.starts + self.lengths
        self.next_starts = np.append(self.starts[1:], 1.0 + self.starts[0])
        self.rot_pos = rotation_positions(self.alpha, self.N)[self.ks + self.N]
        self._starts_list = self.starts.tolist()

    @property
    def size(self) -> int:
        return 2 * self.N + 1

    @property
    def residual_lengths(self) -> np.ndarray:
        return self.next_starts - self.ends

    def rank(self, k: int) -> int:
        return int(self.rank_of[k + self.N])

    def start(self, k: int) -> float:
        return float(self.starts[self.rank_of[k + self.N]])

    def gap_length(self, k) -> np.ndarray:
        return self.lengths[self.rank_of[np.asarray(k) + self.N]]

    def stored(self, k) -> bool:
        return -self.N <= k <= self.N

    def mass_defect(self) -> float:
        """|stored gap mass + residual mass - 1|."""
        total = math.fsum(self.lengths.tolist()) + math.fsum(self.residual_lengths.tolist())
        return abs(total - 1.0)

    def residual_mass(self) -> float:
        return math.fsum(self.residual_lengths.tolist())

    # -- lookup ---------------------------------------------------------

    def locate_many(self, x):
        """Vectorized lookup: (rank, in_gap, offset from the gap start)."""
        x = np.asarray(x, dtype=float)
        r = np.searchsorted(self.starts, x, side="right") - 1
        r = np.clip(r, 0, self.size - 1)
        u = x - self.starts[r]
        return r, u < self.lengths[r], u

    def locate(self, x: float) -> Hit:
        x = wrap(x)
        r = max(bisect.bisect_right(self._starts_list, x) - 1, 0)
        u = x - self._starts_list[r]
        lk = float(self.lengths[r])
        if u < lk:
            return GapHit(int(self.ks[r]), u)
        lo, hi = float(self.ends[r]), float(self.next_starts[r])
        return ResidualHit(r, (x - lo) / (hi - lo))

    # -- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "family": self.family.to_dict(),
            "N": self.N,
            "a_C": self.a_C,
            "tail_bound": self.tail_bound,
            "gaps": [
                {"k": int(k), "rank": r, "a": a, "len": ln}
                for r, (k, a, ln) in enumerate(
                    zip(self.ks.tolist(), self.starts.tolist(), self.lengths.tolist())
                )
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GapTable":
        gaps = sorted(d["gaps"], key=lambda g: g["rank"])
        return cls(
            alpha=float(d["alpha"]),
            family=LengthFamily(**d["family"]),
            N=int(d["N"]),
            a_C=float(d["a_C"]),
            tail_bound=float(d["tail_bound"]),
            ks=np.array([g["k"] for g in gaps], dtype=np.int64),
            starts=np.array([g["a"] for g in gaps], dtype=float),
            lengths=np.array([g["len"] for g in gaps], dtype=float),
        )


def _carry_chain(ks, rot_pos, rank_of, N, alpha):
    """Ranks of the residual arcs that must carry one extra l_N of mass.

    The truncated map sends gap k to gap k+1 for k < N and maps the rest of
    the circle linearly.  The arc holding gap N is a source arc with one gap
    too many; the arc that will hold gap -N is an image arc with one gap too
    many.  Between them runs a chain of residual arcs (left gap index
    k_a+1 .. k_c) that the shift carries onto one another; giving each of
    them l_N extra mass makes every source/image pair of complementary arcs
    equally long, so the map has slope exactly 1 off the stored gaps.
    """
    M = 2 * N + 1
    rN = int(rank_of[2 * N])
    k_a = int(ks[rN - 1])
    # source arc (gaps -N..N-1) containing the rotation position of -N-1
    p = wrap(-(N + 1) * alpha)
    i = int(np.searchsorted(rot_pos, p, side="right") - 1) % M
    if int(ks[i]) == N:
        i -= 1
    k_c = int(ks[i])
    if k_c == k_a:
        return np.array([], dtype=np.int64)
    if k_c < k_a + 1:
        raise ConstructionError("inconsistent gap combinatorics near the truncation")
    return rank_of[np.arange(k_a + 1, k_c + 1) + N]


def build_table(alpha: float, family: LengthFamily, N: int, eta_max: float = 4.375) -> GapTable:
    """Place gaps -N..N on the circle in rotation order with a_0 = 0."""
    from .circle import rotation_order

    if N < 1:
        raise ConstructionError("N must be >= 1")
    gate = twist_gate(family, N, eta_max)
    if not gate < 1.0:
        raise ConstructionError(
            "twist-positivity gate violated: max|l_{k+1}/l_k - 1| * eta_max = %.6g >= 1" % gate
        )
    a_C = normalize(family, N)
    tail_bound = a_C * family.tail_majorant(N)
    if family.kind == "paper_log":
        log.warning(
            "paper_log lengths converge slowly: unstored mass bound is %.3g of the circle",
            tail_bound,
        )

    ks = rotation_order(alpha, N)
    M = len(ks)
    rank_of = np.empty(M, dtype=np.int64)
    rank_of[ks + N] = np.arange(M)
    lengths = length(ks, family, a_C)
    rot_pos = rotation_positions(alpha, N)[ks + N]
    rot_arc = np.diff(np.append(rot_pos, 1.0))

    residual = 1.0 - math.fsum(lengths.tolist())
    chain = _carry_chain(ks, rot_pos, rank_of, N, alpha)
    l_N = float(length(N, family, a_C))
    spread = residual - l_N * len(chain)
    if not spread > 0:
        raise ConstructionError("unstored mass too small to carry the truncation defect")
    res = spread * rot_arc
    res[chain] += l_N

    steps = lengths.astype(np.longdouble) + res.astype(np.longdouble)
    starts = np.concatenate(([0.0], np.cumsum(steps)[:-1])).astype(float)
    return GapTable(alpha, family, N, a_C, tail_bound, ks, starts, lengths)


def semiconjugacy(x, table: GapTable):
    """Collapse each gap I_k to frac(k*alpha); interpolate on residual arcs."""
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    r, in_gap, _ = table.locate_many(x)
    out = table.rot_pos[r].copy()
    res = ~in_gap
    if np.any(res):
        rr = r[res]
        lo, hi = table.ends[rr], table.next_starts[rr]
        s = (x[res] - lo) / (hi - lo)
        p0 = table.rot_pos[rr]
        p1 = table.rot_pos[(rr + 1) % table.size]
        span = np.mod(p1 - p0, 1.0)
        out[res] = wrap(p0 + s * span)
    return float(out[0]) if scalar else out
