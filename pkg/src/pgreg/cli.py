"""Command line entry point: ``pgreg <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import asymptotics as asy
from .formats import (contour_rows, fmt, model_from_dict, model_to_dict, read_x_csv, read_xy_csv, write_csv,
                      write_json)
from .harness import (ESTIMATORS, FUNCTION_IDS, ExperimentConfig, run_contour, run_nonperiodic_comparison,
                      run_table1, table1_lambda_grid, table1_omega_grid)
from .kernels import KernelSpec
from .regression import SpectralSmoother, predict, tune_fit
from .sequence import Ellipsoid

KERNELS = {"periodic-gaussian": "periodic_gaussian", "plain-gaussian": "plain_gaussian",
           "periodic-spline": "periodic_spline"}


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _estimators(text: str) -> tuple[str, ...]:
    names = tuple(v.strip() for v in text.split(",") if v.strip())
    bad = [v for v in names if v not in ESTIMATORS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown estimators: {', '.join(bad)}")
    return names


def _emit(obj, out: str | None) -> None:
    if out:
        write_json(out, obj)
    else:
        print(json.dumps(obj, indent=2, sort_keys=True))


def cmd_fit(args) -> int:
    data = read_xy_csv(args.data)
    spec = KernelSpec.periodic_spline() if args.kernel == "periodic-spline" else KernelSpec(KERNELS[args.kernel], args.omega)
    fit = SpectralSmoother(data.x, spec).fit(data.y, args.lam, args.variant, args.sigma2)
    _emit(model_to_dict(fit), args.out)
    return 0


def cmd_tune(args) -> int:
    data = read_xy_csv(args.data)
    lambdas = args.lambdas or table1_lambda_grid()
    omegas = args.omegas or table1_omega_grid()
    tuned = tune_fit(data, lambdas, omegas, args.variant, KERNELS[args.kernel], args.sigma2)
    _emit(model_to_dict(tuned.fit), args.out)
    return 0


def cmd_predict(args) -> int:
    with open(args.model) as fh:
        fit = model_from_dict(json.load(fh))
    if args.data:
        x = read_x_csv(args.data)
    elif args.x:
        x = np.asarray(args.x)
    else:
        raise ValueError("predict needs --data or --x")
    yhat = predict(fit, x)
    rows = list(zip(x, np.atleast_1d(yhat)))
    if args.out:
        write_csv(args.out, ["x", "yhat"], rows)
    else:
        print("x,yhat")
        for a, b in rows:
            print(f"{fmt(a)},{fmt(b)}")
    return 0


def _config(args, estimators=None) -> ExperimentConfig:
    kw = dict(function=args.function, n=args.n, replications=args.reps, design=args.design,
              master_seed=args.seed, sigma_sq=args.sigma2, jobs=args.jobs)
    if estimators or args.estimators:
        kw["estimators"] = args.estimators or estimators
    return ExperimentConfig(**kw)


def cmd_table1(args) -> int:
    _emit(run_table1(_config(args)).to_dict(), args.out)
    return 0


def cmd_nonperiodic(args) -> int:
    _emit(run_nonperiodic_comparison(_config(args, ("plain_gauss", "periodic_gauss"))).to_dict(), args.out)
    return 0


def cmd_contour(args) -> int:
    grid = run_contour(args.function, args.design, args.seed, n=args.n, jobs=args.jobs)
    header = ["k1", "k2", "omega", "lambda", "ase"]
    if args.out:
        write_csv(args.out, header, contour_rows(grid))
    else:
        print(",".join(header))
        for row in contour_rows(grid):
            print(f"{row[0]},{row[1]},{fmt(row[2])},{fmt(row[3])},{fmt(row[4])}")
    return 0


def cmd_asymptotics(args) -> int:
    n, Q, om = args.n, args.Q, args.omega
    out = {
        "n": n, "Q": Q, "omega": om, "m": args.m, "alpha": args.alpha,
        "minimax_Hinf": asy.asymptotic_minimax_Hinf(om, n),
        "gauss_risk_Hm": asy.gauss_risk_Hm(args.m, Q, n),
        "minimax_Hm": asy.minimax_Hm(args.m, Q, n),
        "optimal_log_inv_lambda_Hm": asy.optimal_log_inv_lambda_Hm(args.m, Q, n, om),
        "risk_analytic": asy.risk_analytic(args.alpha, n),
        "optimal_log_inv_lambda_analytic": asy.optimal_log_inv_lambda_analytic(args.alpha, n, om),
        "efficiency": [
            {"m": m, "risk_ratio": e.risk_ratio, "sample_efficiency": e.sample_efficiency}
            for m in range(1, 11) for e in [asy.efficiency_Hm(m)]
        ],
    }
    _emit(out, args.out)
    return 0


def cmd_pinsker(args) -> int:
    sol = asy.pinsker_solve(Ellipsoid(args.kind, args.param, args.Q), args.n)
    _emit({"kind": args.kind, "param": args.param, "Q": args.Q, "n": args.n,
           "mu": sol.mu, "k": sol.k, "risk": sol.risk, "residual": sol.residual}, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pgreg", description="Periodic Gaussian kernel regularization")
    sub = p.add_subparsers(dest="command", required=True)

    def add_fit_args(sp, with_params):
        sp.add_argument("--data", required=True, help="CSV with header x,y")
        sp.add_argument("--variant", choices=["penalized", "unpenalized-const"], default="penalized")
        sp.add_argument("--kernel", choices=list(KERNELS), default="periodic-gaussian")
        sp.add_argument("--sigma2", type=float, default=1.0)
        sp.add_argument("--out")
        if with_params:
            sp.add_argument("--omega", type=float, default=1.0)
            sp.add_argument("--lambda", dest="lam", type=float, required=True)

    add_fit_args(sp := sub.add_parser("fit", help="fit at fixed (omega, lambda)"), True)
    sp.set_defaults(func=cmd_fit)
    add_fit_args(sp := sub.add_parser("tune", help="C_p-tuned fit"), False)
    sp.add_argument("--lambdas", type=_float_list)
    sp.add_argument("--omegas", type=_float_list)
    sp.set_defaults(func=cmd_tune)

    sp = sub.add_parser("predict", help="evaluate a saved model")
    sp.add_argument("--model", required=True)
    sp.add_argument("--data", help="CSV with an x column")
    sp.add_argument("--x", type=float, nargs="+")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_predict)

    def add_experiment_args(sp):
        sp.add_argument("--function", choices=FUNCTION_IDS, default="f1")
        sp.add_argument("--n", type=int, default=100)
        sp.add_argument("--reps", type=int, default=100)
        sp.add_argument("--design", choices=["equidistant", "nonequidistant"], default="equidistant")
        sp.add_argument("--seed", type=int, default=20040801)
        sp.add_argument("--sigma2", type=float, default=1.0)
        sp.add_argument("--estimators", type=_estimators)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--out")

    add_experiment_args(sp := sub.add_parser("table1", help="spline vs periodic Gaussian comparison"))
    sp.set_defaults(func=cmd_table1)
    add_experiment_args(sp := sub.add_parser("nonperiodic", help="plain Gaussian baseline"))
    sp.set_defaults(func=cmd_nonperiodic)

    sp = sub.add_parser("contour", help="ASE over the (omega, lambda) grid")
    sp.add_argument("--function", choices=FUNCTION_IDS, default="f1")
    sp.add_argument("--design", choices=["equidistant", "nonequidistant"], default="equidistant")
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--n", type=int, default=100)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_contour)

    sp = sub.add_parser("asymptotics", help="closed-form risks and efficiency table")
    sp.add_argument("--n", type=float, default=100.0)
    sp.add_argument("--Q", type=float, default=1.0)
    sp.add_argument("--omega", type=float, default=1.0)
    sp.add_argument("--m", type=float, default=2.0)
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_asymptotics)

    sp = sub.add_parser("pinsker", help="solve Pinsker's program on an ellipsoid")
    sp.add_argument("--kind", choices=["sobolev", "analytic", "infinite_order"], default="sobolev")
    sp.add_argument("--param", type=float, default=2.0)
    sp.add_argument("--Q", type=float, default=1.0)
    sp.add_argument("--n", type=float, default=100.0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_pinsker)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError, json.JSONDecodeError, FloatingPointError) as exc:
        print(f"pgreg {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
