"""Arithmetic on the circle T = R/Z with fundamental domain [0, 1)."""

from __future__ import annotations

import math

import numpy as np

from .errors import ConstructionError


def wrap(x):
    """Reduce ``x`` into [0, 1). Works on floats and arrays."""
    if np.ndim(x) == 0:
        x = float(x)
        if not math.isfinite(x):
            raise ValueError(f"cannot wrap non-finite value {x!r}")
        y = x - math.floor(x)
        # x - floor(x) rounds up to 1.0 for tiny negative x
        return 0.0 if y >= 1.0 else y
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("cannot wrap non-finite values")
    y = x - np.floor(x)
    y[y >= 1.0] = 0.0
    return y


def rotate(theta, alpha):
    return wrap(np.add(theta, alpha))


def signed_gap(a, b):
    """Representative of ``a - b`` in (-1/2, 1/2]."""
    d = np.subtract(a, b)
    # reduce only when needed: a - b of nearby points is exact and stays so
    out = (d > 0.5) | (d <= -0.5)
    if np.any(out):
        r = d - np.floor(d)
        d = np.where(out, np.where(r > 0.5, r - 1.0, r), d)
    return float(d) if np.ndim(d) == 0 else d


def rotation_positions(alpha: float, N: int) -> np.ndarray:
    """frac(k*alpha) for k = -N..N, indexed by k + N.

    alpha is split into a 26-bit head and a tail so that k*head is exact for
    |k| < 2**27; the naive product loses ~log2(N) bits of the fraction.
    """
    if N >= 2**27:
        raise ValueError("N too large for the split product")
    m, e = math.frexp(alpha)
    head = math.ldexp(math.floor(math.ldexp(m, 26)), e - 26)
    tail = alpha - head
    k = np.arange(-N, N + 1, dtype=float)
    p = k * head
    return wrap((p - np.floor(p)) + k * tail)


def rotation_order(alpha: float, N: int) -> np.ndarray:
    """Indices k in -N..N sorted by their circular position frac(k*alpha).

    Raises ConstructionError when two positions coincide to within 4 ulps,
    which is how a rational (or numerically rational) alpha shows up.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    pos = rotation_positions(alpha, N)
    order = np.argsort(pos, kind="stable")
    sorted_pos = pos[order]
    if len(sorted_pos) > 1:
        diffs = np.diff(np.append(sorted_pos, sorted_pos[0] + 1.0))
        bad = np.flatnonzero(diffs <= 4 * np.spacing(1.0))
        if bad.size:
            i = int(bad[0])
            j = (i + 1) % len(order)
            raise ConstructionError(
                "rotation positions coincide for k=%d and k=%d; alpha is "
                "rational at this precision" % (order[i] - N, order[j] - N)
            )
    return order - N
