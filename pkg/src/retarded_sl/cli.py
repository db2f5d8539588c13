"""Command-line front end: ``retarded-sl <command> CONFIG [options]``."""

from __future__ import annotations

import argparse
import math
import sys
import warnings

import numpy as np

from .asymptotics import asymptotic_report
from .charfn import char_fn, char_fn_many, char_fn_unperturbed
from .config import load_config
from .dde import GridSpec
from .errors import RetardedSLError
from .pqrs import compute_pqrs
from .problem import CoefficientWarning, HALF_PI, build_problem, sample_problem
from .spectrum import compute_spectrum
from .trace import build_report

COMMANDS = ("validate", "eigen", "charfn", "pqrs", "asym", "trace")

EPILOG = """\
environment:
  THREADS   number of worker threads for characteristic-function sweeps
            (default 1); output does not depend on it
"""


def fmt(x) -> str:
    """17 significant digits; NaN/inf spelled as in JSON-less CSV."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def to_json(obj, indent: int = 2, level: int = 0) -> str:
    """Deterministic JSON with fixed float formatting."""
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}{to_json(str(k))}: {to_json(v, indent, level + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [pad + to_json(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, str):
        import json

        return json.dumps(obj, ensure_ascii=False)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    x = float(obj)
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def _csv(header: list[str], rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _sweep(args) -> np.ndarray:
    if args.step <= 0:
        raise ValueError("--step must be positive")
    count = int(math.floor((args.to - args.from_) / args.step + 1e-9))
    return args.from_ + np.arange(count + 1) * args.step


def cmd_validate(p, cfg, args) -> str:
    lines = [f"config: {cfg.source}"]
    for key in ("a1", "a1p", "a2", "a2p", "b", "delta"):
        lines.append(f"{key} = {fmt(getattr(p, key))}")
    for key in ("q_left", "q_right", "delay_left", "delay_right"):
        lines.append(f"{key} = {cfg.problem[key]}")
    table = sample_problem(p, 1025)
    left, right = table[:1025], table[1025:]
    lines.append(f"min delay (left piece) = {fmt(left[:, 2].min())}")
    lines.append(f"min delay (right piece) = {fmt(right[:, 2].min())}")
    lines.append(f"min x - delay(x) (left piece, bound 0) = {fmt(left[:, 3].min())}")
    lines.append(f"min x - delay(x) - pi/2 (right piece, bound 0) = {fmt(right[:, 3].min() - HALF_PI)}")
    for w in p.warnings:
        lines.append(f"warning: {w}")
    lines.append("valid")
    return "\n".join(lines) + "\n"


def cmd_eigen(p, cfg, args) -> str:
    num = cfg.numerics
    g = GridSpec(num.grid_points)
    spec = compute_spectrum(p, num.n_max, num.scan_step, g, num.root_tol, args.threads, _refine(args))
    rows = []
    for lab in spec.labels():
        e = spec[lab]
        rows.append([str(lab), e.mu, e.mu0, e.eps, char_fn(p, e.mu, g)])
    for w in spec.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return _csv(["label", "mu", "mu0", "eps", "f_residual"], rows)


def cmd_charfn(p, cfg, args) -> str:
    mus = _sweep(args)
    f = char_fn_many(p, mus, GridSpec(cfg.numerics.grid_points), args.threads)
    f0 = char_fn_unperturbed(p, mus)
    return _csv(["mu", "f", "f0"], zip(mus, f, np.atleast_1d(f0)))


def cmd_pqrs(p, cfg, args) -> str:
    rows = []
    for mu in _sweep(args):
        v = compute_pqrs(p, mu, cfg.numerics.quad_points)
        rows.append([mu, v.p_val, v.q_val, v.r_val, v.s_val])
    return _csv(["mu", "P", "Q", "R", "S"], rows)


def cmd_asym(p, cfg, args) -> str:
    num = cfg.numerics
    spec = compute_spectrum(p, num.n_max, num.scan_step, GridSpec(num.grid_points), num.root_tol,
                            args.threads, _refine(args))
    rows = asymptotic_report(p, spec, num.quad_points, args.pqrs_at)
    return _csv(["n", "mu", "mu_pred", "residual", "scaled_residual"],
                ([str(r.n), r.mu_computed, r.mu_predicted, r.residual, r.scaled_residual] for r in rows))


def cmd_trace(p, cfg, args) -> str:
    num = cfg.numerics
    spec = compute_spectrum(p, num.n_max, num.scan_step, GridSpec(num.grid_points), num.root_tol,
                            args.threads, _refine(args))
    rep = build_report(p, spec, num.n_max, num.quad_points, args.pqrs_at)
    doc = {
        "n_max": rep.n_max,
        "rhs": rep.rhs,
        "c_const": rep.c_const,
        "d_const": rep.d_const,
        "partial_sums": rep.partial_sums,
        "residuals": rep.residuals,
        "decay_ratios": rep.decay_ratios,
        "pqrs_at": rep.pqrs_at,
        "warnings": list(p.warnings) + rep.warnings,
    }
    return to_json(doc) + "\n"


def _refine(args):
    return GridSpec(args.refine_grid) if args.refine_grid else None


HANDLERS = {
    "validate": cmd_validate,
    "eigen": cmd_eigen,
    "charfn": cmd_charfn,
    "pqrs": cmd_pqrs,
    "asym": cmd_asym,
    "trace": cmd_trace,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="retarded-sl",
        description="Spectra, asymptotics and trace sums for a retarded Sturm-Liouville problem.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.add_argument("config", help="problem configuration file")
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--nmax", type=int, help="override numerics.n_max")
        sp.add_argument("--grid-points", type=int, help="override numerics.grid_points")
        sp.add_argument("--quad-points", type=int, help="override numerics.quad_points")
        sp.add_argument("--scan-step", type=float, help="override numerics.scan_step")
        sp.add_argument("--root-tol", type=float, help="override numerics.root_tol")
        sp.add_argument("--threads", type=int, default=None, help="worker threads (default: $THREADS or 1)")
        if name in ("charfn", "pqrs"):
            sp.add_argument("--from", dest="from_", type=float, default=-10.0)
            sp.add_argument("--to", type=float, default=10.0)
            sp.add_argument("--step", type=float, default=0.05)
        if name in ("eigen", "asym", "trace"):
            sp.add_argument("--refine-grid", type=int, default=None,
                            help="steps per half used to refine roots (default: same as the scan)")
        if name in ("asym", "trace"):
            sp.add_argument("--pqrs-at", choices=("mu0", "n"), default="mu0",
                            help="where P and Q are evaluated in corrections (default mu0)")
    return parser


def run_command(cmd: str, cfg, args) -> str:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CoefficientWarning)
        p = build_problem(cfg)
    return HANDLERS[cmd](p, cfg, args)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config).with_numerics(
            n_max=args.nmax,
            grid_points=args.grid_points,
            quad_points=args.quad_points,
            scan_step=args.scan_step,
            root_tol=args.root_tol,
        )
        text = run_command(args.command, cfg, args)
    except (RetardedSLError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(text, args.out)
    return 0


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
