"""Build configuration: flat ``key = value`` files with ``#`` comments."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from .errors import ConstructionError

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class BuildConfig:
    alpha: float = GOLDEN
    family: str = "quadratic"
    C: float = 100.0
    delta: float = 1.0
    N: int = 200000
    bump_p: int = 3
    x0_fraction: float = 0.5
    K_orbit: int = 300
    dL: float = 0.2
    dR: float = 0.1
    fL: float = 0.9
    rng_seed: int = 1

    def violations(self) -> list:
        bad = []
        if not (math.isfinite(self.alpha) and 0.0 < self.alpha < 1.0):
            bad.append("alpha: must lie in (0, 1)")
        if self.family not in ("quadratic", "paper_log"):
            bad.append("family: must be quadratic or paper_log")
        if not self.C > 1:
            bad.append("C: must be > 1")
        gate = self.gate_value()
        if gate is not None and not gate < 1.0:
            bad.append(f"C: twist gate max|l_(k+1)/l_k - 1| * eta_max = {gate:.6g} >= 1")
        if not self.delta > 0:
            bad.append("delta: must be > 0")
        if self.N < 8:
            bad.append("N: must be >= 8")
        if self.bump_p < 2:
            bad.append("bump_p: must be >= 2")
        if not 0.0 < self.x0_fraction < 1.0:
            bad.append("x0_fraction: must lie in (0, 1)")
        if self.K_orbit < 1:
            bad.append("K_orbit: must be >= 1")
        elif self.K_orbit + 1 > self.N:
            bad.append("K_orbit: K_orbit + 1 must not exceed N")
        if not self.dL > 0:
            bad.append("dL: must be > 0")
        if not self.dR > 0:
            bad.append("dR: must be > 0")
        if self.dL == self.dR:
            bad.append("dL, dR: beta_0^R != beta_0^L violated (dL == dR)")
        if not 0.0 < self.fL < 1.0:
            bad.append("fL: must lie in (0, 1)")
        return bad

    def gate_value(self):
        """Twist-positivity gate for these lengths and bump, or None if undefined."""
        if self.C <= 0 or self.bump_p < 2 or self.family not in ("quadratic", "paper_log"):
            return None
        if self.family == "paper_log" and (self.C <= 1 or self.delta <= 0):
            return None
        # |l_(k+1)/l_k - 1| is largest next to k = 0
        k = np.arange(-64, 64)
        x = np.abs(k) + self.C
        if self.family == "quadratic":
            d = 1.0 / x**2
        else:
            d = 1.0 / (x * np.log(x) ** (1.0 + self.delta))
        p = int(self.bump_p)
        eta_max = 2 * math.factorial(2 * p + 1) / math.factorial(p) ** 2 / 4.0**p
        return float(np.max(np.abs(d[1:] / d[:-1] - 1.0)) * eta_max)

    def validate(self) -> "BuildConfig":
        bad = self.violations()
        if bad:
            raise ConstructionError("invalid configuration:\n  " + "\n  ".join(bad))
        return self

    def to_dict(self) -> dict:
        return asdict(self)


_TYPES = {f.name: f.type for f in fields(BuildConfig)}


def _coerce(key: str, raw: str):
    kind = _TYPES[key]
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    return raw


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConstructionError(f"config line {lineno}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in _TYPES:
            raise ConstructionError(f"config line {lineno}: unknown key {key!r}")
        try:
            out[key] = _coerce(key, raw)
        except ValueError:
            raise ConstructionError(f"config line {lineno}: bad value for {key}: {raw!r}") from None
    return out


def load_config(path=None, overrides: dict | None = None) -> BuildConfig:
    values = {}
    if path is not None:
        with open(path) as fh:
            values.update(parse_config_text(fh.read()))
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    return BuildConfig(**values).validate()
