"""Simulation study: test functions, designs, the smoother comparison, contour and baseline runs."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .kernels import KernelSpec
from .regression import RegressionData, SpectralSmoother, average_squared_error, tune_fit
from .statlab import make_stream, mean_sd, paired_t_test

FUNCTION_IDS = ("f1", "f2", "f3", "f4")
ESTIMATORS = ("periodic_gauss", "periodic_gauss_unpenalized_const", "periodic_spline", "plain_gauss")
CONTOUR_LEVELS = (1.01, 1.05, 1.1, 1.2, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0)


def f1(x):
    x = np.asarray(x, dtype=float)
    return np.sin(x) ** 2 * (x >= 0)


def f2(x):
    x = np.asarray(x, dtype=float)
    return -x - np.pi + 2 * (x + np.pi / 2) * (x >= -np.pi / 2) + 2 * (-x + np.pi / 2) * (x >= np.pi / 2)


def f3(x):
    x = np.asarray(x, dtype=float)
    return 1.0 / (2.0 - np.sin(x))


def f4(x):
    x = np.asarray(x, dtype=float)
    s, c = np.sin(x), np.cos(x)
    return 2 + s + 2 * c + 3 * s**2 + 4 * c**3 + 5 * s**3


TEST_FUNCTIONS = {"f1": f1, "f2": f2, "f3": f3, "f4": f4}


def eval_test_function(fid: str, x):
    try:
        f = TEST_FUNCTIONS[fid]
    except KeyError:
        raise ValueError(f"unknown test function {fid!r}") from None
    out = f(x)
    return float(out) if np.ndim(out) == 0 else out


def make_design(kind: str, n: int, rng: np.random.Generator | None = None) -> NDArray[np.float64]:
    """Equidistant ``-pi + 2 pi j / n`` or wrapped ``N(1/4, 1/16)`` scaled to the circle."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if kind == "equidistant":
        return -np.pi + 2.0 * np.pi * np.arange(1, n + 1) / n
    if kind == "nonequidistant":
        if rng is None:
            raise ValueError("nonequidistant design needs a random stream")
        z = 0.25 + 0.25 * rng.standard_normal(n)
        return -np.pi + 2.0 * np.pi * (z - np.floor(z))
    raise ValueError(f"unknown design kind {kind!r}")


def table1_omega_grid() -> tuple[float, ...]:
    return tuple(0.3 * k - 0.1 for k in range(1, 11))


def table1_lambda_grid() -> tuple[float, ...]:
    return tuple(math.exp(-0.4 * k + 7) for k in range(1, 51))


def contour_omega_grid() -> tuple[float, ...]:
    return tuple(math.sqrt(k / 5) for k in range(1, 101))


def contour_lambda_grid() -> tuple[float, ...]:
    return tuple(math.exp(-k / 5) for k in range(1, 101))


# estimator name -> (kernel kind, variant)
_ESTIMATOR_SETUP = {
    "periodic_gauss": ("periodic_gaussian", "penalized"),
    "periodic_gauss_unpenalized_const": ("periodic_gaussian", "unpenalized-const"),
    "periodic_spline": ("periodic_spline", "unpenalized-const"),
    "plain_gauss": ("plain_gaussian", "unpenalized-const"),
}


@dataclass(frozen=True)
class ExperimentConfig:
    function: str = "f1"
    n: int = 100
    replications: int = 100
    design: str = "equidistant"
    lambda_grid: tuple[float, ...] = field(default_factory=table1_lambda_grid)
    omega_grid: tuple[float, ...] = field(default_factory=table1_omega_grid)
    estimators: tuple[str, ...] = ("periodic_spline", "periodic_gauss", "periodic_gauss_unpenalized_const")
    master_seed: int = 20040801
    noise_scale: float = 1.0
    sigma_sq: float = 1.0
    jobs: int = 1

    def __post_init__(self):
        if self.function not in FUNCTION_IDS:
            raise ValueError(f"unknown function {self.function!r}")
        if self.n < 4:
            raise ValueError("n must be >= 4")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if not self.lambda_grid or not self.omega_grid:
            raise ValueError("grids must be nonempty")
        bad = set(self.estimators) - set(ESTIMATORS)
        if bad or not self.estimators:
            raise ValueError(f"unknown estimators {sorted(bad)}")
        object.__setattr__(self, "lambda_grid", tuple(float(v) for v in self.lambda_grid))
        object.__setattr__(self, "omega_grid", tuple(float(v) for v in self.omega_grid))
        object.__setattr__(self, "estimators", tuple(self.estimators))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda_grid"] = list(self.lambda_grid)
        d["omega_grid"] = list(self.omega_grid)
        d["estimators"] = list(self.estimators)
        d.pop("jobs")
        return d


class SmootherCache:
    """Eigendecompositions keyed by (design bytes, kernel spec); thread safe enough for our use."""

    def __init__(self):
        self._store: dict = {}

    def __call__(self, x: NDArray, spec: KernelSpec) -> SpectralSmoother:
        key = (x.tobytes(), spec)
        sm = self._store.get(key)
        if sm is None:
            sm = SpectralSmoother(x, spec)
            self._store[key] = sm
        return sm


@dataclass(frozen=True)
class ReplicationResult:
    index: int
    ase: dict[str, float]
    params: dict[str, tuple[float, float | None]]


def _replication(config: ExperimentConfig, index: int, cache: SmootherCache) -> ReplicationResult:
    rng = make_stream(config.master_seed, index)
    x = make_design(config.design, config.n, rng)
    truth = TEST_FUNCTIONS[config.function](x)
    y = truth + config.noise_scale * rng.standard_normal(config.n)
    data = RegressionData(x, y)
    ase, params = {}, {}
    for name in config.estimators:
        kind, variant = _ESTIMATOR_SETUP[name]
        try:
            tuned = tune_fit(data, config.lambda_grid, config.omega_grid, variant, kind,
                             config.sigma_sq, smoothers=cache)
        except Exception as exc:  # surface which replication failed
            raise RuntimeError(f"replication {index}, estimator {name}: {exc}") from exc
        ase[name] = average_squared_error(tuned.fit.fitted, truth)
        params[name] = (tuned.lam, tuned.omega)
    return ReplicationResult(index, ase, params)


def run_replications(config: ExperimentConfig) -> list[ReplicationResult]:
    cache = SmootherCache()
    if config.design == "equidistant":
        # one shared design; warm the cache serially so workers only read it
        x = make_design("equidistant", config.n)
        for name in config.estimators:
            kind, _ = _ESTIMATOR_SETUP[name]
            for om in ([None] if kind == "periodic_spline" else config.omega_grid):
                cache(x, KernelSpec.periodic_spline() if om is None else KernelSpec(kind, om))
    idx = range(config.replications)
    if config.jobs > 1:
        with ThreadPoolExecutor(config.jobs) as pool:
            return list(pool.map(lambda i: _replication(config, i, cache), idx))
    return [_replication(config, i, cache) for i in idx]


@dataclass(frozen=True)
class PairTest:
    pair: tuple[str, str]
    t: float
    df: int
    p: float
    degenerate: bool


@dataclass(frozen=True)
class Table1Report:
    config: ExperimentConfig
    per_estimator: dict[str, dict[str, float]]
    tests: list[PairTest]
    ase: dict[str, list[float]]

    def mean_ase(self, name: str) -> float:
        return self.per_estimator[name]["mean_ase"]

    def test(self, a: str, b: str) -> PairTest:
        for t in self.tests:
            if t.pair in ((a, b), (b, a)):
                return t
        raise KeyError((a, b))

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "per_estimator": self.per_estimator,
            "tests": [{"pair": list(t.pair), "t": t.t, "df": t.df, "p": t.p, "degenerate": t.degenerate}
                      for t in self.tests],
            "metadata": {"git": ""},
        }


def _summarize(config: ExperimentConfig, reps: list[ReplicationResult]) -> Table1Report:
    ase = {name: [r.ase[name] for r in reps] for name in config.estimators}
    per = {}
    for name, vals in ase.items():
        if len(vals) >= 2:
            m, sd = mean_sd(vals)
        else:
            m, sd = float(vals[0]), float("nan")
        per[name] = {"mean_ase": m, "sd_ase": sd}
    tests = []
    if config.replications >= 2:
        for a, b in itertools.combinations(config.estimators, 2):
            res = paired_t_test(ase[a], ase[b])
            tests.append(PairTest((a, b), res.t_stat, res.df, res.p_value, res.degenerate))
    else:
        for a, b in itertools.combinations(config.estimators, 2):
            tests.append(PairTest((a, b), float("nan"), 0, float("nan"), True))
    return Table1Report(config, per, tests, ase)


def run_table1(config: ExperimentConfig) -> Table1Report:
    """Mean ASE per estimator over replications plus pairwise paired t-tests.

    Each replication draws fresh noise from its own stream; the equidistant
    design is shared.
    """
    return _summarize(config, run_replications(config))


def run_nonperiodic_comparison(config: ExperimentConfig) -> Table1Report:
    """The smoother comparison protocol for the plain Gaussian kernel, alongside the periodic one."""
    est = tuple(dict.fromkeys(("plain_gauss", "periodic_gauss") + tuple(
        e for e in config.estimators if e in ("plain_gauss", "periodic_gauss"))))
    cfg = ExperimentConfig(**{**config.to_dict(), "estimators": est, "jobs": config.jobs})
    return run_table1(cfg)


@dataclass(frozen=True)
class ContourGrid:
    function: str
    design_kind: str
    k1: NDArray[np.int64]
    k2: NDArray[np.int64]
    omegas: NDArray[np.float64]
    lambdas: NDArray[np.float64]
    ase: NDArray[np.float64]  # (len(k1), len(k2)); rows omega, columns lambda
    min_value: float
    levels: tuple[float, ...]
    x: NDArray[np.float64] = field(repr=False)
    y: NDArray[np.float64] = field(repr=False)

    def argmin_k2(self) -> NDArray[np.int64]:
        """For each omega, the k2 index minimizing ASE."""
        return self.k2[np.argmin(self.ase, axis=1)]

    def valley_r_squared(self, k1_min: int = 10) -> float:
        """R^2 of regressing argmin ``-log lambda`` on ``omega^2`` over ``k1 >= k1_min``."""
        mask = self.k1 >= k1_min
        xs = self.omegas[mask] ** 2
        ys = self.argmin_k2()[mask] / 5.0
        slope, icept = np.polyfit(xs, ys, 1)
        resid = ys - (slope * xs + icept)
        ss_tot = float(np.sum((ys - ys.mean()) ** 2))
        return 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0


def run_contour(function: str, design_kind: str, master_seed: int, n: int = 100,
                variant: str = "penalized", jobs: int = 1) -> ContourGrid:
    """ASE over the 100 x 100 (omega, lambda) grid for one dataset."""
    rng = make_stream(master_seed, 0)
    x = make_design(design_kind, n, rng)
    truth = TEST_FUNCTIONS[function](x)
    y = truth + rng.standard_normal(n)
    omegas = np.asarray(contour_omega_grid())
    lambdas = np.asarray(contour_lambda_grid())

    def row(om):
        fitted, _ = SpectralSmoother(x, KernelSpec.periodic_gaussian(om)).fitted_many(y, lambdas, variant)
        return np.mean((fitted - truth) ** 2, axis=1)

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            rows = list(pool.map(row, omegas))
    else:
        rows = [row(om) for om in omegas]
    ase = np.vstack(rows)
    a = float(ase.min())
    return ContourGrid(function, design_kind, np.arange(1, 101), np.arange(1, 101), omegas, lambdas,
                       ase, a, tuple(f * a for f in CONTOUR_LEVELS), x, y)
