"""Risk of unbiased-risk tuning relative to the best fixed (lambda, omega) on the grid."""

import argparse
import math

import numpy as np

from pgreg.asymptotics import pinsker_solve
from pgreg.sequence import Ellipsoid, Penalty, sample_observations
from pgreg.shrinkage import TuningGrid, exact_risk, shrink_weights, tune
from pgreg.statlab import make_stream


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, nargs="+", default=[1000])
    p.add_argument("--m", type=float, nargs="+", default=[1, 2])
    p.add_argument("--reps", type=int, default=500)
    p.add_argument("--L", type=int, default=200)
    p.add_argument("--seed", type=int, default=909)
    args = p.parse_args()

    grid = TuningGrid.default()
    print(f"{'m':>4}{'n':>9}{'best grid risk':>16}{'tuned risk':>12}{'ratio':>8}{'se':>7}")
    for m in args.m:
        for n in args.n:
            spec = Ellipsoid("sobolev", m, 1.0)
            a = spec.pinsker_weight(np.arange(args.L + 1))
            theta = np.sqrt(np.clip(pinsker_solve(spec, n).mu / a - 1, 0, None) / n)
            best = min(exact_risk(theta, shrink_weights(lam, Penalty.periodic_gaussian(om), args.L), n).total
                       for lam in grid.lambdas for om in grid.omegas)
            rng = make_stream(args.seed, int(m * 1000) + n)
            losses = np.array([np.sum((tune(sample_observations(theta, n, rng), grid).estimate - theta) ** 2)
                               for _ in range(args.reps)])
            se = losses.std(ddof=1) / math.sqrt(args.reps) / best
            print(f"{m:>4g}{n:>9}{best:>16.3e}{losses.mean():>12.3e}{losses.mean() / best:>8.3f}{se:>7.3f}")


if __name__ == "__main__":
    main()
