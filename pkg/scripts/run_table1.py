"""Mean ASE for the four test functions, spline vs periodic Gaussian vs plain Gaussian."""

import argparse
import json
import os

from pgreg.harness import FUNCTION_IDS, ExperimentConfig, run_table1

NAMES = ("periodic_spline", "periodic_gauss", "periodic_gauss_unpenalized_const", "plain_gauss")


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int, default=20040801)
    p.add_argument("--design", default="equidistant", choices=["equidistant", "nonequidistant"])
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--json", help="also write all reports to this file")
    args = p.parse_args()

    reports = {}
    print(f"{'fn':4}" + "".join(f"{n:>34}" for n in NAMES) + f"{'p(spline,PG)':>14}")
    for fid in FUNCTION_IDS:
        cfg = ExperimentConfig(function=fid, replications=args.reps, design=args.design, estimators=NAMES,
                               master_seed=args.seed, jobs=args.jobs)
        rep = run_table1(cfg)
        reports[fid] = rep.to_dict()
        row = "".join(f"{rep.mean_ase(n):>34.4f}" for n in NAMES)
        print(f"{fid:4}{row}{rep.test('periodic_spline', 'periodic_gauss').p:>14.3g}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(reports, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
