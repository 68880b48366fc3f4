"""Experiment command-line interface.

Subcommands:
  curves      MSD learning curves for the configured algorithms
  sweep       steady-state MSD (empirical vs theory) over an eta grid
  stability   forgetting-factor stability bound over an eta grid
  complexity  predicted per-iteration operation counts and gate costs

Every flag overrides the corresponding key of the JSON config given with
--config. Output is CSV (stdout if --out is omitted for tables).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import complexity as cx
from . import experiments as ex
from .errors import ConfigError
from .signals import random_covariance

DEFAULT_DIMS = (4, 8, 16, 32, 64)


def _parse_grid(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad numeric list {text!r}") from exc


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--eta", help="input-noise variance (comma list for grids)")
    p.add_argument("--gamma", type=float, help="noise-variance ratio xi/eta")
    p.add_argument("--p-exponent", type=int, help="P with lambda = 1 - 2^-P")
    p.add_argument("--dcd-n", type=int, help="DCD max successful updates N")
    p.add_argument("--dcd-m", type=int, help="DCD step-ladder bits M")
    p.add_argument("--dcd-h", type=float, help="DCD amplitude range H")
    p.add_argument("--runs", type=int, help="Monte-Carlo replicas")
    p.add_argument("--steps", type=int, help="samples per replica")
    p.add_argument("--algos", help="comma list from: dcd_rtls,exact_rtls,rls,bcrls")
    p.add_argument("--seed", type=int, help="base seed (replica r uses seed + r)")
    p.add_argument("--delta", type=float, help="covariance initialization Phi_0 = delta*I")
    p.add_argument("--structured", action="store_true", default=None,
                   help="shift-structured input streams")
    p.add_argument("--out", help="output CSV path (default: stdout)")


def _build_config(args, eta_scalar: bool) -> ex.ExperimentConfig:
    overrides = {
        "gamma": args.gamma,
        "p_exponent": args.p_exponent,
        "runs": args.runs,
        "steps": args.steps,
        "base_seed": args.seed,
        "delta": args.delta,
        "structured": args.structured,
    }
    if eta_scalar and args.eta is not None:
        overrides["eta"] = float(args.eta)
    if args.algos is not None:
        overrides["algos"] = tuple(args.algos.split(","))
    cfg = ex.config_from_json(args.config, **overrides)
    dcd = cfg.dcd
    if args.dcd_n is not None or args.dcd_m is not None or args.dcd_h is not None:
        from .dcd import DcdParams

        dcd = DcdParams(
            n_max=args.dcd_n if args.dcd_n is not None else dcd.n_max,
            m_bits=args.dcd_m if args.dcd_m is not None else dcd.m_bits,
            h_range=args.dcd_h if args.dcd_h is not None else dcd.h_range,
        )
        from dataclasses import replace

        cfg = replace(cfg, dcd=dcd)
    return cfg


def _emit_rows(rows: list[dict], out: str | None) -> None:
    if out:
        ex.write_rows_csv(rows, out)
        return
    if rows:
        print(",".join(rows[0].keys()))
        for row in rows:
            print(",".join(ex._fmt(v) for v in row.values()))


def _cmd_curves(args) -> int:
    cfg = _build_config(args, eta_scalar=True)
    curves = ex.run_learning_curves(cfg)
    out = args.out or "curves.csv"
    ex.write_curves_csv(curves, out)
    print(f"wrote {out}: {len(curves)} curve(s) x {cfg.steps} steps")
    return 0


def _cmd_sweep(args) -> int:
    cfg = _build_config(args, eta_scalar=False)
    if args.eta is None:
        raise ConfigError("sweep requires --eta with a comma-separated grid")
    grid = sorted(_parse_grid(args.eta))
    rows = ex.run_steady_state_sweep(cfg, grid)
    _emit_rows(rows, args.out)
    return 0


def _cmd_stability(args) -> int:
    cfg = _build_config(args, eta_scalar=False)
    if args.eta is None:
        raise ConfigError("stability requires --eta with a comma-separated grid")
    grid = _parse_grid(args.eta)
    if cfg.structured:
        import numpy as np

        cov = np.eye(cfg.L)
    else:
        cov, _, _ = random_covariance(cfg.L, cfg.base_seed)
    rows = ex.run_stability_curve(cov, grid)
    _emit_rows(rows, args.out)
    return 0


def _cmd_complexity(args) -> int:
    cfg = _build_config(args, eta_scalar=False)
    dims = DEFAULT_DIMS
    if args.config:
        with open(args.config) as fh:
            dims = tuple(json.load(fh).get("dims", DEFAULT_DIMS))
    rows = []
    for structured in (True, False):
        for L in dims:
            for algo in cx.ALGOS:
                ops = cx.predicted_ops(algo, L, cfg.dcd.n_max, cfg.dcd.m_bits, structured)
                rows.append(
                    {
                        "algo": algo,
                        "L": L,
                        "structured": int(structured),
                        "mul": ops.mul,
                        "add": ops.add,
                        "div": ops.div,
                        "sqrt": ops.sqrt,
                        "gates": cx.gate_cost(ops),
                    }
                )
    _emit_rows(rows, args.out)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dcdrtls", description="DCD-RTLS experiment runner"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, doc in (
        ("curves", _cmd_curves, "ensemble MSD learning curves"),
        ("sweep", _cmd_sweep, "steady-state MSD vs input-noise variance"),
        ("stability", _cmd_stability, "forgetting-factor stability bound"),
        ("complexity", _cmd_complexity, "operation counts and gate costs"),
    ):
        p = sub.add_parser(name, help=doc)
        _add_common(p)
        p.set_defaults(fn=fn)
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, ArithmeticError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
