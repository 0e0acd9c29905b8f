import json
import math
from dataclasses import replace

import numpy as np
import pytest
from scipy import integrate

from pgreg.harness import (CONTOUR_LEVELS, ESTIMATORS, TEST_FUNCTIONS, ExperimentConfig, contour_lambda_grid,
                           contour_omega_grid, eval_test_function, f1, make_design, run_contour,
                           run_nonperiodic_comparison, run_replications, run_table1, table1_lambda_grid,
                           table1_omega_grid)
from pgreg.kernels import KernelSpec
from pgreg.regression import RegressionData, SpectralSmoother, average_squared_error, tune_fit
from pgreg.statlab import make_stream

FAST = ("periodic_gauss", "periodic_gauss_unpenalized_const")


@pytest.mark.parametrize("fid, x, expected", [
    ("f1", -1.0, 0.0), ("f1", math.pi / 2, 1.0), ("f2", math.pi / 2, math.pi / 2), ("f2", 0.0, 0.0),
    ("f2", -math.pi / 2, -math.pi / 2), ("f3", math.pi / 2, 1.0), ("f4", 0.0, 8.0),
])
def test_function_values(fid, x, expected):
    assert eval_test_function(fid, x) == pytest.approx(expected, abs=1e-15)


def test_unknown_function():
    with pytest.raises(ValueError):
        eval_test_function("f9", 0.0)


@pytest.mark.parametrize("fid", sorted(TEST_FUNCTIONS))
def test_functions_periodic(fid):
    assert abs(eval_test_function(fid, -math.pi) - eval_test_function(fid, math.pi)) < 1e-12


def test_f2_is_a_triangle_wave():
    x = np.linspace(-math.pi, math.pi, 401)
    ref = np.where(np.abs(x) <= math.pi / 2, x, np.sign(x) * math.pi - x)
    np.testing.assert_allclose(eval_test_function("f2", x), ref, atol=1e-14)


def test_equidistant_design():
    np.testing.assert_allclose(make_design("equidistant", 4), [-math.pi / 2, 0.0, math.pi / 2, math.pi], atol=1e-15)
    with pytest.raises(ValueError):
        make_design("equidistant", 1)
    with pytest.raises(ValueError):
        make_design("grid", 10)


def _wrapped_normal_cdf(x):
    # numerically integrate the wrapped N(1/4, 1/16) density of frac(z), mapped to (-pi, pi]
    def dens(u):
        k = np.arange(-6, 7)
        return float(np.sum(np.exp(-((u + k - 0.25) ** 2) / (2 * 0.0625)))) / math.sqrt(2 * math.pi * 0.0625)

    u_grid = np.linspace(0, 1, 2001)
    cdf = np.concatenate([[0.0], np.cumsum([integrate.quad(dens, a, b)[0] for a, b in zip(u_grid, u_grid[1:])])])
    return np.interp((np.asarray(x) + math.pi) / (2 * math.pi), u_grid, cdf)


def test_nonequidistant_design_law():
    x = np.sort(make_design("nonequidistant", 10**5, make_stream(3)))
    assert np.all((x >= -math.pi) & (x < math.pi))
    F = _wrapped_normal_cdf(x)
    ecdf_hi = np.arange(1, x.size + 1) / x.size
    ks = max(np.max(ecdf_hi - F), np.max(F - (ecdf_hi - 1 / x.size)))
    assert ks < 0.01
    counts, edges = np.histogram(x, bins=40, range=(-math.pi, math.pi))
    peak = 0.5 * (edges[np.argmax(counts)] + edges[np.argmax(counts) + 1])
    assert abs(peak + math.pi / 2) < 0.2


def test_nonequidistant_reproducible():
    a = make_design("nonequidistant", 50, make_stream(8, 2))
    b = make_design("nonequidistant", 50, make_stream(8, 2))
    np.testing.assert_array_equal(a, b)
    with pytest.raises(ValueError):
        make_design("nonequidistant", 50)


def test_grid_fidelity():
    om = table1_omega_grid()
    assert len(om) == 10
    np.testing.assert_allclose(om, np.arange(0.2, 2.91, 0.3), atol=1e-14)
    lam = table1_lambda_grid()
    np.testing.assert_allclose(lam, np.exp(7 - 0.4 * np.arange(1, 51)), rtol=1e-14)
    np.testing.assert_allclose(contour_omega_grid(), np.sqrt(np.arange(1, 101) / 5), rtol=1e-15)
    np.testing.assert_allclose(contour_lambda_grid(), np.exp(-np.arange(1, 101) / 5), rtol=1e-15)
    cfg = ExperimentConfig()
    assert cfg.omega_grid == om and cfg.lambda_grid == lam


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(function="g")
    with pytest.raises(ValueError):
        ExperimentConfig(n=3)
    with pytest.raises(ValueError):
        ExperimentConfig(lambda_grid=())
    with pytest.raises(ValueError):
        ExperimentConfig(estimators=("lasso",))
    assert set(ESTIMATORS) >= set(ExperimentConfig().estimators)


def test_noise_free_single_replication():
    cfg = ExperimentConfig(function="f3", replications=1, noise_scale=0.0, estimators=FAST)
    rep = run_table1(cfg)
    x = make_design("equidistant", 100)
    truth = eval_test_function("f3", x)
    direct = tune_fit(RegressionData(x, truth), cfg.lambda_grid, cfg.omega_grid, "penalized")
    assert rep.mean_ase("periodic_gauss") == pytest.approx(average_squared_error(direct.fit, truth), rel=1e-12)
    assert all(t.degenerate for t in rep.tests)


def test_two_replications_structure():
    cfg = ExperimentConfig(function="f2", replications=2, estimators=("plain_gauss", "periodic_gauss"))
    rep = run_nonperiodic_comparison(cfg)
    d = rep.to_dict()
    assert set(d) == {"config", "per_estimator", "tests", "metadata"}
    assert set(d["per_estimator"]) == {"plain_gauss", "periodic_gauss"}
    for name, stats in d["per_estimator"].items():
        assert stats["mean_ase"] == pytest.approx(np.mean(rep.ase[name]), rel=1e-15)
        assert math.isfinite(stats["sd_ase"])
    assert len(d["tests"]) == 1 and d["tests"][0]["df"] == 1
    json.dumps(d)


def test_default_estimators_run():
    rep = run_table1(ExperimentConfig(function="f4", replications=2))
    assert set(rep.per_estimator) == {"periodic_spline", "periodic_gauss", "periodic_gauss_unpenalized_const"}
    assert len(rep.tests) == 3
    assert rep.test("periodic_gauss", "periodic_spline").pair == ("periodic_spline", "periodic_gauss")


def test_replications_use_own_streams():
    cfg = ExperimentConfig(replications=3, estimators=("periodic_gauss",), design="nonequidistant")
    reps = run_replications(cfg)
    assert [r.index for r in reps] == [0, 1, 2]
    again = run_replications(ExperimentConfig(**{**cfg.to_dict(), "replications": 1}))
    assert again[0].ase == reps[0].ase


def test_serial_and_parallel_identical():
    base = dict(function="f1", replications=6, estimators=FAST, design="nonequidistant")
    serial = json.dumps(run_table1(ExperimentConfig(**base)).to_dict(), sort_keys=True)
    parallel = json.dumps(run_table1(ExperimentConfig(**base, jobs=3)).to_dict(), sort_keys=True)
    assert serial == parallel


def test_estimator_kernels():
    cfg = ExperimentConfig(replications=1, estimators=("plain_gauss",))
    rep = run_replications(cfg)[0]
    lam, om = rep.params["plain_gauss"]
    assert lam in cfg.lambda_grid and om in cfg.omega_grid
    assert not KernelSpec.plain_gaussian(om).periodic


@pytest.fixture(scope="module")
def contour():
    return run_contour("f1", "equidistant", 1)


def test_contour_structure(contour):
    assert contour.ase.shape == (100, 100)
    assert contour.min_value > 0 and contour.min_value == contour.ase.min()
    assert contour.levels == tuple(f * contour.min_value for f in CONTOUR_LEVELS)
    assert CONTOUR_LEVELS == (1.01, 1.05, 1.1, 1.2, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0)
    np.testing.assert_allclose(contour.omegas, contour_omega_grid())
    assert contour.argmin_k2().shape == (100,)


def test_contour_cell_matches_direct_fit(contour):
    i, j = 17, 42
    fit = SpectralSmoother(contour.x, KernelSpec.periodic_gaussian(contour.omegas[i])).fit(contour.y, contour.lambdas[j])
    assert contour.ase[i, j] == pytest.approx(average_squared_error(fit, f1), rel=1e-10)


def test_contour_deterministic_and_parallel(contour):
    again = run_contour("f1", "equidistant", 1, jobs=4)
    np.testing.assert_array_equal(again.ase, contour.ase)


def test_valley_r_squared_on_exact_line(contour):
    # a synthetic ASE surface whose valley is exactly k2 = 4 * omega^2 + 10 gives R^2 = 1
    k2_star = np.rint(contour.omegas**2 * 5 * 0.8 + 10).astype(int)
    ase = (contour.k2[None, :] - k2_star[:, None]) ** 2 + 1.0
    assert replace(contour, ase=ase.astype(float)).valley_r_squared() == pytest.approx(1.0, abs=1e-3)
