"""End-to-end assembly of the construction and its JSON persistence."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .base_map import BumpSpec, DenjoyMap, OrbitTable, build_orbit
from .config import BuildConfig
from .denjoy import GapTable, LengthFamily, build_table, twist_gate
from .errors import ConstructionError
from .surgery import ModifiedMap, SlopeSeq, SurgeryProfile, build_all_surgery, seed_slopes
from .twist import TwistSystem

log = logging.getLogger(__name__)

FORMAT_VERSION = 1


@dataclass
class Build:
    config: BuildConfig
    table: GapTable
    orbit: OrbitTable
    slopes: SlopeSeq
    profiles: list
    spec: BumpSpec = field(default_factory=BumpSpec)

    def __post_init__(self):
        self.g = DenjoyMap(self.table, self.spec)
        self.h = ModifiedMap(self.table, self.spec, self.orbit, self.profiles)
        self.system = TwistSystem(self.h, self.g)

    def x(self, k: int) -> float:
        """Circle position of the marked point x_k."""
        return self.orbit.position(k, self.table)

    def ramp_width(self, k: int) -> float:
        """Smallest surgery ramp touching x_k (used to size derivative steps)."""
        i = k + self.orbit.K
        return float(min(self.h.epsL[i], self.h.epsR[i]))

    def manifest(self) -> dict:
        c = self.config
        fam = self.table.family
        return {
            "config": c.to_dict(),
            "tail_bound": self.table.tail_bound,
            "a_C": self.table.a_C,
            "K_orbit": self.orbit.K,
            "seed_offsets": {"dL": c.dL, "dR": c.dR, "fL": c.fL},
            "twist_gate": twist_gate(fam, self.table.N, self.spec.eta_max),
            "bump": {"p": self.spec.p, "c": self.spec.c, "eta_max": self.spec.eta_max},
            "surgered_gaps": f"|k| <= {self.orbit.K}; h = g on all other gaps",
            "truncation_kinks": (
                "phi has small one-sided slope jumps at x_{K+1} and x_{-K}, where "
                "surgered and unsurgered gaps meet under h and h^-1"
            ),
        }

    def to_dict(self) -> dict:
        d = {"version": FORMAT_VERSION}
        d.update(self.table.to_dict())
        d["orbit"] = self.orbit.to_dict()
        d["surgery"] = {
            "slopes": self.slopes.to_dict(),
            "profiles": [p.to_dict() for p in self.profiles],
        }
        d["manifest"] = self.manifest()
        return d

    def dumps(self) -> str:
        # json writes floats with repr, the shortest round-trip decimal
        return json.dumps(self.to_dict(), separators=(",", ":"))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.dumps())

    @classmethod
    def from_dict(cls, d: dict) -> "Build":
        if d.get("version") != FORMAT_VERSION:
            raise ConstructionError(f"unsupported build version {d.get('version')!r}")
        try:
            config = BuildConfig(**d["manifest"]["config"])
            table = GapTable.from_dict(d)
            orbit = OrbitTable.from_dict(d["orbit"])
            slopes = SlopeSeq.from_dict(d["surgery"]["slopes"])
            profiles = [SurgeryProfile(**p) for p in d["surgery"]["profiles"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ConstructionError(f"corrupt build document: {exc}") from exc
        return cls(config, table, orbit, slopes, profiles, BumpSpec(config.bump_p))

    @classmethod
    def load(cls, path) -> "Build":
        with open(path) as fh:
            try:
                d = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConstructionError(f"corrupt build document: {exc}") from exc
        return cls.from_dict(d)


def build_system(config: BuildConfig | None = None) -> Build:
    """Gap table, marked orbit, slopes and surgery for one configuration."""
    config = (config or BuildConfig()).validate()
    spec = BumpSpec(config.bump_p)
    family = LengthFamily(config.family, config.C, config.delta)
    table = build_table(config.alpha, family, config.N, spec.eta_max)
    log.info("gap table: N=%d a_C=%.12g tail_bound=%.3g", table.N, table.a_C, table.tail_bound)
    orbit = build_orbit(config.x0_fraction, config.K_orbit, table, spec)
    slopes = seed_slopes(orbit, config.dL, config.dR, config.fL)
    profiles = build_all_surgery(slopes, orbit, table, spec)
    log.info("surgery: %d half-gaps", len(profiles))
    return Build(config, table, orbit, slopes, profiles, spec)


def perturbed(build: Build, d_beta0R: float) -> Build:
    """Copy of ``build`` with beta_0^R shifted after seeding (balance broken)."""
    bR = build.slopes.beta_R.copy()
    K = build.orbit.K
    bR[K] += d_beta0R
    slopes = SlopeSeq(K, build.slopes.beta_L.copy(), bR, build.slopes.m_tilde0)
    profiles = []
    for p in build.profiles:
        if p.k == 0 and p.side == "R":
            from .surgery import build_surgery

            p = build_surgery(0, "R", slopes, build.orbit, build.table, build.spec)
        profiles.append(p)
    return Build(build.config, build.table, build.orbit, slopes, profiles, build.spec)
