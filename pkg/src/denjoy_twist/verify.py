"""Numerical oracles: one-sided derivatives, pointwise-C^1 sampling,
rotation numbers, and the acceptance suite runner."""

from __future__ import annotations

import math
import zlib
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .circle import signed_gap, wrap


@dataclass
class DerivativeEstimate:
    point: float
    side: str
    value: float
    richardson_error: float
    steps_used: list
    low_confidence: bool = False


def one_sided_derivative(
    fn: Callable, x: float, side: str, max_step: float = 1e-3, n_steps: int = 15
) -> DerivativeEstimate:
    """Richardson-extrapolated one-sided difference quotient.

    Steps are max_step * 2^-i.  The tableau entry with the smallest
    consistency error is returned; its error is the gap to the previous
    extrapolant.  Growth of the error along the diagonal marks the
    estimate as low confidence (it is still returned).
    """
    if side not in ("L", "R"):
        raise ValueError("side must be 'L' or 'R'")
    sgn = 1.0 if side == "R" else -1.0
    f0 = float(fn(x))
    steps = []
    table = []
    best, best_err = None, math.inf
    low = False
    prev_diag_err = None
    for i in range(n_steps):
        h = max_step * 2.0**-i
        xp = x + sgn * h
        hh = abs(xp - x)
        steps.append(hh)
        d = sgn * (float(fn(wrap(xp))) - f0) / hh
        row = [d]
        for j in range(1, i + 1):
            fac = 2.0**j - 1.0
            row.append(row[j - 1] + (row[j - 1] - table[i - 1][j - 1]) / fac)
            err = max(abs(row[j] - row[j - 1]), abs(row[j] - table[i - 1][j - 1]))
            if err < best_err:
                best, best_err = row[j], err
        if i == 0:
            best, best_err = d, math.inf
        table.append(row)
        if i >= 2:
            diag_err = abs(row[i] - table[i - 1][i - 1])
            if prev_diag_err is not None and diag_err > 2.0 * prev_diag_err and best_err < diag_err:
                break
            prev_diag_err = diag_err
    if not math.isfinite(best_err):
        low = True
        best_err = abs(table[-1][0] - table[-2][0]) if len(table) > 1 else math.inf
    return DerivativeEstimate(x, side, best, best_err, steps, low)


def two_sequence_c1_test(
    fn: Callable, x: float, trials: int = 1000, radius: float = 1e-6, rng=None, min_sep: float = 1e-2
) -> float:
    """Spread (max - min) of difference quotients over random pairs near x.

    Points are drawn on both sides of x at distance in (0, radius]; half of
    the pairs straddle x.  Pairs closer than ``min_sep * radius`` are
    redrawn so rounding in fn does not dominate the quotient.
    """
    if trials < 10:
        raise ValueError("trials too small")
    rng = np.random.default_rng(rng)
    t1 = rng.uniform(-radius, radius, trials)
    t2 = rng.uniform(-radius, radius, trials)
    straddle = np.arange(trials) % 2 == 0
    t2 = np.where(straddle, -np.sign(t1) * np.abs(t2), t2)
    for _ in range(20):
        close = np.abs(t1 - t2) < min_sep * radius
        if not close.any():
            break
        t2[close] = rng.uniform(-radius, radius, close.sum())
    keep = np.abs(t1 - t2) >= min_sep * radius
    t1, t2 = t1[keep], t2[keep]
    p1, p2 = wrap(x + t1), wrap(x + t2)
    q = (np.asarray(fn(p1)) - np.asarray(fn(p2))) / signed_gap(p1, p2)
    return float(q.max() - q.min())


def rotation_number(step: Callable, n_iter: int, x_start: float = 0.0) -> float:
    """Mean lift displacement over n_iter iterates.

    ``step`` maps a point of [0, 1) to its image under the pinned lift, so
    that step(x) - x is the displacement.
    """
    if n_iter < 1:
        raise ValueError("n_iter must be positive")
    x = wrap(x_start)
    total = 0.0
    acc = []
    for _ in range(n_iter):
        y = float(step(x))
        acc.append(y - x)
        x = wrap(y)
    total = math.fsum(acc)
    return total / n_iter


# -- report ------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    status: str
    measured: float
    tolerance: float
    details: str = ""


@dataclass
class VerificationReport:
    manifest: dict
    results: list = field(default_factory=list)

    @property
    def status(self) -> str:
        return "pass" if all(r.status == "pass" for r in self.results) else "fail"

    def add(self, name, ok, measured, tolerance, details=""):
        self.results.append(
            CheckResult(name, "pass" if ok else "fail", float(measured), float(tolerance), details)
        )

    def failing(self) -> list:
        return [r.name for r in self.results if r.status != "pass"]

    def to_dict(self) -> dict:
        return {
            "manifest": self.manifest,
            "results": [asdict(r) for r in self.results],
            "status": self.status,
        }


def suite_rng(seed: int, name: str) -> np.random.Generator:
    """Independent stream per suite, stable under reordering or parallelism."""
    return np.random.default_rng([seed, zlib.crc32(name.encode())])
