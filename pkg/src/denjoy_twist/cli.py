"""Command line front end: build, verify, sample, orbit, plot."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys

import numpy as np

from . import __version__
from .build import Build, build_system
from .config import load_config
from .errors import ConstructionError
from .suites import expand_suites, run_suite
from .svg import line_chart

log = logging.getLogger("denjoy_twist")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CURVE_COLUMNS = ["theta", "psi", "phi", "h", "hprime_left", "hprime_right"]
ORBIT_COLUMNS = ["k", "x_k", "alpha_k", "m_k", "beta_L", "beta_R"]


class UsageError(Exception):
    pass


def _load_build(path) -> Build:
    if not path or not os.path.exists(path):
        raise UsageError(f"build file not found: {path}")
    try:
        return Build.load(path)
    except ConstructionError as exc:
        raise UsageError(str(exc)) from exc


def _open_out(path, mode="w"):
    try:
        return open(path, mode, newline="" if "b" not in mode else None)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from exc


def _fmt(x) -> str:
    return repr(float(x))


# -- subcommands ----------------------------------------------------------


def cmd_build(args) -> int:
    overrides = {"rng_seed": args.seed}
    try:
        config = load_config(args.config, overrides)
        b = build_system(config)
    except ConstructionError as exc:
        print(f"build failed ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from exc
    out = args.out or "build.json"
    with _open_out(out) as fh:
        fh.write(b.dumps())
    log.info("wrote %s (N=%d, K_orbit=%d, tail_bound=%.3g)", out, b.table.N, b.orbit.K, b.table.tail_bound)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        suites = expand_suites(args.suites.split(","))
    except KeyError as exc:
        raise UsageError(f"unknown suite {exc.args[0]!r}") from None
    b = _load_build(args.build)
    rep = run_suite(b, suites, seed=args.seed)
    text = json.dumps(rep.to_dict(), indent=1, sort_keys=True)
    if args.out:
        with _open_out(args.out) as fh:
            fh.write(text + "\n")
    if not args.quiet:
        for r in rep.results:
            print(f"{r.status.upper():4s} {r.name}  measured={r.measured:.4g} tol={r.tolerance:.4g}")
        print(f"status: {rep.status}")
    if rep.status != "pass":
        print("failing: " + ", ".join(rep.failing()), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def sample_curve(b: Build, n: int) -> np.ndarray:
    """Equispaced theta plus the stored orbit points, sorted."""
    th = np.arange(n) / n
    xs = np.array([b.x(k) for k in b.orbit.ks()])
    return np.unique(np.concatenate([th, xs]))


def curve_rows(b: Build, theta):
    S, h = b.system, b.h
    return (
        theta,
        S.psi(theta),
        S.phi(theta),
        h.forward(theta),
        h.derivative(theta, "L"),
        h.derivative(theta, "R"),
    )


def cmd_sample(args) -> int:
    b = _load_build(args.build)
    cols = curve_rows(b, sample_curve(b, args.n))
    with _open_out(args.out or "curve.csv") as fh:
        w = csv.writer(fh)
        w.writerow(CURVE_COLUMNS)
        for row in zip(*cols):
            w.writerow([_fmt(v) for v in row])
    return EXIT_OK


def cmd_orbit(args) -> int:
    b = _load_build(args.build)
    o, s = b.orbit, b.slopes
    with _open_out(args.out or "orbit.csv") as fh:
        w = csv.writer(fh)
        w.writerow(ORBIT_COLUMNS)
        for k in o.ks().tolist():
            w.writerow(
                [k, _fmt(b.x(k)), _fmt(o.alpha_at(k)), _fmt(o.m_at(k)),
                 _fmt(s.beta(k, "L")), _fmt(s.beta(k, "R"))]
            )
    return EXIT_OK


def cmd_plot(args) -> int:
    b = _load_build(args.build)
    S = b.system
    outdir = args.out or "plots"
    try:
        os.makedirs(outdir, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot write {outdir}: {exc.strerror}") from exc
    th = np.arange(4000) / 4000
    orbit = [b.x(k) for k in range(-20, 21)]
    charts = {
        "psi.svg": line_chart(
            [("psi = h - Id", th, S.psi(th))], "Invariant curve psi", "theta", "psi",
            markers=[(x, float(S.psi(x))) for x in orbit],
        ),
        "phi.svg": line_chart([("phi", th, S.phi(th))], "Kick phi", "theta", "phi"),
    }
    x0 = b.x(0)
    w = 4.0 * b.ramp_width(0)
    t = np.linspace(-w, w, 801)
    t = t[t != 0.0]
    xs = x0 + t
    charts["derivatives.svg"] = line_chart(
        [
            ("h' left", t, b.h.derivative(xs, "L")),
            ("h' right", t, b.h.derivative(xs, "R")),
        ],
        "One-sided derivatives of h near x_0", "theta - x_0", "slope",
    )
    for name, svg in charts.items():
        with _open_out(os.path.join(outdir, name)) as fh:
            fh.write(svg)
    return EXIT_OK


# -- entry point ----------------------------------------------------------


def _global_flags(default) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=default)
    common.add_argument("--config", help="key=value configuration file")
    common.add_argument("--out", help="output path")
    common.add_argument("--seed", type=int, help="override the RNG seed")
    common.add_argument("--quiet", action="store_true", help="suppress progress output")
    return common


def make_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand; the copy on
    # the subcommands suppresses defaults so it never clobbers earlier values
    p = argparse.ArgumentParser(prog="denjoy-twist", parents=[_global_flags(None)], description=__doc__)
    p.set_defaults(quiet=False)
    common = _global_flags(argparse.SUPPRESS)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("build", parents=[common], help="construct and serialize the system")
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("verify", parents=[common], help="run verification suites")
    sp.add_argument("build", help="build JSON")
    sp.add_argument("--suites", default="all", help="comma list of suites or groups (all, modules, acceptance)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sample", parents=[common], help="write the curve CSV")
    sp.add_argument("build")
    sp.add_argument("-n", type=int, default=1000, help="equispaced samples (orbit points are added)")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("orbit", parents=[common], help="write the orbit CSV")
    sp.add_argument("build")
    sp.set_defaults(func=cmd_orbit)

    sp = sub.add_parser("plot", parents=[common], help="write SVG plots into a directory")
    sp.add_argument("build")
    sp.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO, format="%(levelname)s %(message)s"
    )
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
