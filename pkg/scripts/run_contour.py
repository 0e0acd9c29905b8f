"""ASE surface over the (omega, lambda) grid and the straightness of its valley."""

import argparse

import numpy as np

from pgreg.formats import contour_rows, write_csv
from pgreg.harness import FUNCTION_IDS, run_contour


def branch_r_squared(xs, ys):
    if xs.size < 3 or np.ptp(ys) == 0:
        return float("nan")
    return float(np.corrcoef(xs, ys)[0, 1] ** 2)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--function", default="f1", choices=FUNCTION_IDS)
    p.add_argument("--seeds", type=int, nargs="+", default=[1])
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--csv", help="write the grid of the first seed and design here")
    args = p.parse_args()

    for design in ("equidistant", "nonequidistant"):
        for seed in args.seeds:
            g = run_contour(args.function, design, seed, jobs=args.jobs)
            k2 = g.argmin_k2()
            mask = g.k1 >= 10
            # split where the argmin jumps down: each piece is one valley
            jumps = np.flatnonzero(np.diff(k2) < -5) + 1
            pieces = np.split(np.arange(k2.size), jumps)
            per_branch = [branch_r_squared(g.omegas[i][mask[i]] ** 2, k2[i][mask[i]] / 5.0) for i in pieces]
            print(f"{design:15} seed {seed}: R^2 {g.valley_r_squared():.3f}  min ASE {g.min_value:.4f}  "
                  f"branches {len(pieces)} with R^2 " + ", ".join(f"{r:.3f}" for r in per_branch))
            if args.csv:
                write_csv(args.csv, ["k1", "k2", "omega", "lambda", "ase"], contour_rows(g))
                args.csv = None


if __name__ == "__main__":
    main()
