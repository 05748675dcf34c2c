"""Command-line entry point.

Exit codes: 0 success, 1 a verified statement failed, 2 bad input or
out-of-range parameter, 3 operator or computation error, 4 output directory
or extended precision unavailable.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional

from . import explore as X
from . import verify as V
from .asymptotics import strip_trend
from .errors import (DegenerateAffine, InvalidOperator, LineDeltaError, NotUnitCircle, OutOfRange,
                     ZeroStep)
from .findiff import FiniteDifferenceOperator, apply, delta_theta, s_nm, stirling2
from .geometry import Line
from .poly import EXTENDED_DPS, Polynomial
from .roots import PRECISIONS, SolverConfig, config_from_env, find_roots

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_OPERATOR, EXIT_OUTPUT = 0, 1, 2, 3, 4

FIGURE_PRESETS = {
    "fig12_small": (range(1, 5), range(1, 9)),
    "fig12_full": (range(1, 13), range(1, 33)),
}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class RunManifest:
    subcommand: str
    params: dict
    seed: int
    outputs: List[str] = field(default_factory=list)
    timestamp: str = ""

    def write(self, directory: Path) -> Path:
        self.timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        path = directory / "manifest.json"
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")
        return path


# ------------------------------------------------------------------ helpers
def _solver(args) -> SolverConfig:
    return config_from_env(SolverConfig(precision=args.precision, seed=args.seed))


def _step(args) -> complex:
    re = args.h if args.h is not None else args.h_re
    return complex(re, args.h_im)


def _read_json(source: str):
    try:
        if source == "-":
            text = sys.stdin.read()
        elif source.lstrip()[:1] in ("{", "["):
            text = source
        else:
            text = Path(source).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_INPUT, f"cannot parse JSON input: {exc}") from exc


def _polynomial(args) -> Polynomial:
    obj = _read_json(args.input)
    try:
        return Polynomial.from_json(obj)
    except (LineDeltaError, ValueError, TypeError, KeyError) as exc:
        raise CliError(EXIT_INPUT, f"bad polynomial: {exc}") from exc


def _out_dir(path: Optional[str]) -> Optional[Path]:
    if path is None:
        return None
    d = Path(path)
    try:
        d.mkdir(parents=True, exist_ok=True)
        probe = d / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise CliError(EXIT_OUTPUT, f"output directory not writable: {exc}") from exc
    return d


def _emit(text: str, out: Optional[Path], name: str, manifest: Optional[RunManifest]):
    if out is None:
        print(text)
        return
    target = out / name
    target.write_text(text + "\n")
    if manifest is not None:
        manifest.outputs.append(str(target))


def _finish(out, manifest):
    if out is not None and manifest is not None:
        manifest.write(out)


def _params(args, *names) -> dict:
    return {n: getattr(args, n) for n in names if getattr(args, n, None) is not None}


# ------------------------------------------------------------- subcommands
def cmd_apply(args) -> int:
    p = _polynomial(args)
    try:
        if args.operator:
            T = FiniteDifferenceOperator.from_json(_read_json(args.operator))
            q = apply(T, p)
        else:
            q = delta_theta(args.theta, _step(args), p)
    except (ZeroStep, InvalidOperator) as exc:
        raise CliError(EXIT_OPERATOR, str(exc)) from exc
    except ValueError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from exc
    text = json.dumps(q.to_json())
    if args.out and not Path(args.out).is_dir() and Path(args.out).suffix == ".json":
        try:
            Path(args.out).write_text(text + "\n")
        except OSError as exc:
            raise CliError(EXIT_OUTPUT, str(exc)) from exc
        return EXIT_OK
    out = _out_dir(args.out)
    manifest = RunManifest("apply", _params(args, "theta", "h_re", "h_im", "h", "operator"), args.seed)
    _emit(text, out, "image.json", manifest)
    _finish(out, manifest)
    return EXIT_OK


def cmd_roots(args) -> int:
    p = _polynomial(args)
    rs = find_roots(p, _solver(args))
    out = _out_dir(args.out)
    manifest = RunManifest("roots", _params(args, "precision"), args.seed)
    _emit(json.dumps(rs.to_json(), indent=2), out, "roots.json", manifest)
    _finish(out, manifest)
    return EXIT_OK


def _line_operator(args) -> FiniteDifferenceOperator:
    if args.operator:
        try:
            return FiniteDifferenceOperator.from_json(_read_json(args.operator))
        except (KeyError, ValueError) as exc:
            raise CliError(EXIT_INPUT, f"bad operator: {exc}") from exc
    from .findiff import delta_theta_operator
    return delta_theta_operator(args.theta, _step(args))


def _sweep(args):
    thetas = (args.theta,) if args.theta_given else V.DEFAULT_THETAS
    given = args.h is not None or args.h_re_given or args.h_im != 0
    steps = (abs(_step(args)),) if given else V.DEFAULT_STEPS
    return thetas, steps


def cmd_verify(args) -> int:
    out = _out_dir(args.out)
    cfg = _solver(args)
    ens = V.E.EnsembleConfig(max_degree=args.n_max) if args.n_max else None
    kw = {"cfg": cfg}
    if ens is not None:
        kw["ensemble"] = ens
    try:
        if args.theorem == "line":
            T = _line_operator(args)
            report = V.verify_line_preservation(T, Line(args.line_phi, args.line_offset), args.trials,
                                                cfg, args.seed, args.workers,
                                                **({"ensemble": ens} if ens else {}))
        elif args.theorem == "strip":
            h = _step(args)
            if h.imag != 0 or h.real <= 0:
                raise CliError(EXIT_INPUT, "strip check needs a real positive step")
            report = V.verify_strip_preservation(args.theta, h.real, args.r, args.trials, cfg, args.seed,
                                                 args.workers, args.simplicity_width,
                                                 **({"ensemble": ens} if ens else {}))
        else:
            if args.theorem in ("simplicity", "extremal", "mesh"):
                kw["thetas"], kw["steps"] = _sweep(args)
            name = args.theorem
            report = V.verify_ensemble(name, args.trials, args.seed, args.workers, **kw)
    except (NotUnitCircle, InvalidOperator, ZeroStep) as exc:
        raise CliError(EXIT_OPERATOR, str(exc)) from exc
    manifest = RunManifest(f"verify {args.theorem}",
                           _params(args, "theta", "h_re", "h_im", "h", "r", "trials", "n_max",
                                   "line_phi", "line_offset", "simplicity_width", "precision"),
                           args.seed)
    _emit(report.dumps(), out, f"verify_{args.theorem}.json", manifest)
    _finish(out, manifest)
    status = "ok" if report.ok else f"{len(report.failures)} failure(s)"
    print(f"verify {args.theorem}: {report.trials} trials, {status}, "
          f"worst deviation {report.worst_deviation:.3g}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_figures(args) -> int:
    out = _out_dir(args.out or "figures")
    real, imag = FIGURE_PRESETS[args.preset]
    roots = [complex(k) for k in real] + [complex(0, -k) for k in imag]
    if args.preset == "fig12_full":
        try:
            import mpmath  # noqa: F401
        except ImportError as exc:
            raise CliError(EXIT_OUTPUT, "extended precision is unavailable") from exc
        p = Polynomial.from_roots(roots, dps=EXTENDED_DPS)
        cfg = SolverConfig(precision="extended", seed=args.seed)
    else:
        p = Polynomial.from_roots(roots)
        cfg = _solver(args)
    ray = complex(math.cos(args.angle), math.sin(args.angle))
    report = strip_trend(p, args.theta, ray, args.h_magnitudes, cfg)
    manifest = RunManifest(f"figures {args.preset}",
                           {"theta": args.theta, "angle": args.angle, "h_magnitudes": args.h_magnitudes},
                           args.seed)
    for mag in args.h_magnitudes:
        _emit(report.to_csv(report.rows_for(float(mag))).rstrip("\n"), out,
              f"{args.preset}_h{mag:g}.csv", manifest)
    _emit(json.dumps(report.summary(), indent=2, sort_keys=True), out, f"{args.preset}_summary.json",
          manifest)
    _finish(out, manifest)
    for mag, dev, err in zip(args.h_magnitudes, report.deviation, report.angle_errors()):
        print(f"|h|={mag:g}: line deviation {dev:.4g}, angle error {err:.3g} rad", file=sys.stderr)
    return EXIT_OK


def cmd_explore(args) -> int:
    out = _out_dir(args.out)
    cfg = _solver(args)
    h = abs(_step(args))
    if args.conjecture == "geometric_sum_si":
        ev = X.geometric_sum_si(args.n, args.theta, h, cfg)
    elif args.conjecture == "strip_decrease":
        ev = X.strip_decrease(args.trials, args.theta, args.h_magnitudes or (0.5, 1, 2, 4), args.seed,
                              cfg=cfg)
    else:
        ev = X.EXPERIMENTS[args.conjecture](trials=args.trials, theta=args.theta, h=h, seed=args.seed,
                                            cfg=cfg)
    manifest = RunManifest(f"explore {args.conjecture}", ev.params, args.seed)
    _emit(json.dumps(ev.to_json(), indent=2, sort_keys=True), out, f"explore_{args.conjecture}.json",
          manifest)
    _finish(out, manifest)
    return EXIT_OK


def cmd_stirling(args) -> int:
    try:
        value = stirling2(args.n, args.m)
        poly = s_nm(args.n, args.m)
    except OutOfRange as exc:
        raise CliError(EXIT_INPUT, str(exc)) from exc
    print(value)
    if poly.degree >= 1:
        rs = find_roots(poly, _solver(args))
        print(f"{'re':>22} {'im':>22} {'|re-1/2|':>10}")
        for z in sorted(rs.locations, key=lambda v: v.imag):
            print(f"{z.real:22.15g} {z.imag:22.15g} {abs(z.real - 0.5):10.2e}")
    return EXIT_OK


# ------------------------------------------------------------------ parser
class _Given(argparse.Action):
    """Store the value and remember that the user supplied it."""

    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        setattr(namespace, f"{self.dest}_given", True)


def _common(p: argparse.ArgumentParser):
    p.add_argument("--theta", type=float, default=0.0, action=_Given)
    p.add_argument("--h-re", type=float, default=1.0, action=_Given, dest="h_re")
    p.add_argument("--h-im", type=float, default=0.0, dest="h_im")
    p.add_argument("--h", type=float, default=None, help="real step, shorthand for --h-re")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--precision", choices=PRECISIONS, default="auto",
                   help="overridden by the LINEDELTA_PRECISION environment variable")
    p.add_argument("--out", default=None, help="output directory (stdout when omitted)")
    p.set_defaults(theta_given=False, h_re_given=False)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="linedelta", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("apply", help="apply Delta_{theta,h} or a general operator to a polynomial")
    p.add_argument("input", help="polynomial JSON: a file, '-' for stdin, or inline text")
    p.add_argument("--operator", help="operator JSON (file or inline) instead of --theta/--h")
    _common(p)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("roots", help="roots with multiplicities and residuals")
    p.add_argument("input")
    _common(p)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("verify", help="Monte-Carlo check of a root-geometry statement")
    p.add_argument("theorem", choices=["line", "strip", "mesh", "extremal", "simplicity", "czd", "si",
                                       "walsh", "oishi"])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--n-max", type=int, default=None, dest="n_max", help="largest sampled degree")
    p.add_argument("--r", type=float, default=0.2, help="strip half-width")
    p.add_argument("--simplicity-width", type=float, default=None, dest="simplicity_width")
    p.add_argument("--operator", help="operator JSON for the line check")
    p.add_argument("--line-phi", type=float, default=0.0, dest="line_phi")
    p.add_argument("--line-offset", type=float, default=0.0, dest="line_offset")
    p.add_argument("--workers", type=int, default=1)
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("figures", help="root coordinates along a ray of steps, as CSV")
    p.add_argument("preset", choices=sorted(FIGURE_PRESETS))
    p.add_argument("--h-magnitudes", type=float, nargs="+", default=[10.0, 50.0], dest="h_magnitudes")
    p.add_argument("--angle", type=float, default=math.pi / 3, help="argument of h")
    _common(p)
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("explore", help="evidence runs for open conjectures (never fails)")
    p.add_argument("conjecture", choices=sorted(X.EXPERIMENTS))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--h-magnitudes", type=float, nargs="+", default=None, dest="h_magnitudes")
    _common(p)
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("stirling", help="Stirling number S(n, m) and the roots of S_nm")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    _common(p)
    p.set_defaults(func=cmd_stirling)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "trials", 1) is not None and getattr(args, "trials", 1) < 1:
        print("error: --trials must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    env = os.environ.get("LINEDELTA_PRECISION")
    if env and env.strip().lower() not in PRECISIONS:
        print(f"error: LINEDELTA_PRECISION={env!r} is not one of {PRECISIONS}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (OutOfRange, DegenerateAffine) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except LineDeltaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OPERATOR


if __name__ == "__main__":
    sys.exit(main())
