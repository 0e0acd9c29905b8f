"""Kernel ridge regression on the circle with C_p tuning.

A single symmetric eigendecomposition ``K = V D V'`` per (design, kernel)
serves every lambda: the smoother is ``S = V T V'`` with
``T = D (D + lambda I)^-1``. The variant with an unpenalized constant
solves the stationarity system

    (K + lambda I) c + b 1 = y,    1' c = 0

by eliminating ``b`` in the same eigenbasis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .kernels import KernelSpec, cross_kernel, gram

VARIANTS = ("penalized", "unpenalized-const")


@dataclass(frozen=True)
class RegressionData:
    x: NDArray[np.float64]
    y: NDArray[np.float64]

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.shape != y.shape or x.ndim != 1:
            raise ValueError("x and y must be 1-d arrays of equal length")
        if x.size < 2:
            raise ValueError("need at least two observations")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError("data must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.size


@dataclass(frozen=True)
class FitResult:
    c: NDArray[np.float64]
    b: float
    fitted: NDArray[np.float64]
    smoother_trace: float
    lam: float
    spec: KernelSpec
    cp: float
    design: NDArray[np.float64] = field(repr=False)
    variant: str = "penalized"


class SpectralSmoother:
    """Eigendecomposition of one Gram matrix, reusable across lambda and y."""

    def __init__(self, design: ArrayLike, spec: KernelSpec):
        g = gram(design, spec)
        self.design = g.design
        self.spec = spec
        self.K = g.K
        d, V = np.linalg.eigh(g.K)
        if not np.all(np.isfinite(d)):
            raise FloatingPointError("eigendecomposition produced non-finite values")
        # PSD up to rounding
        self.d = np.clip(d, 0.0, None)
        self.V = V
        self.u = V.T @ np.ones(self.design.size)

    @property
    def n(self) -> int:
        return self.design.size

    def fit(self, y: ArrayLike, lam: float, variant: str = "penalized", sigma_sq: float = 1.0) -> FitResult:
        if not lam > 0:
            raise ValueError("lambda must be positive")
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        y = np.asarray(y, dtype=float)
        z = self.V.T @ y
        w = 1.0 / (self.d + lam)
        if variant == "penalized":
            b = 0.0
            coef = w * z
            trace = float(np.sum(self.d * w))
        else:
            wu = w * self.u
            s = float(np.dot(self.u, wu))
            b = float(np.dot(wu, z)) / s
            coef = w * (z - b * self.u)
            trace = self.n - lam * (float(np.sum(w)) - float(np.dot(wu, wu)) / s)
        c = self.V @ coef
        fitted = self.V @ (self.d * coef) + b
        cp = float(np.sum((y - fitted) ** 2) / self.n + 2.0 * sigma_sq * trace / self.n)
        return FitResult(c, b, fitted, trace, lam, self.spec, cp, self.design, variant)

    def fitted_many(self, y: ArrayLike, lambdas: ArrayLike, variant: str = "penalized") -> tuple[NDArray, NDArray]:
        """Fitted values (rows) and smoother traces for many lambdas at once."""
        y = np.asarray(y, dtype=float)
        lambdas = np.asarray(lambdas, dtype=float)
        z = self.V.T @ y
        W = 1.0 / (self.d[None, :] + lambdas[:, None])
        if variant == "penalized":
            coef = W * z
            b = np.zeros(lambdas.size)
            trace = np.sum(self.d * W, axis=1)
        elif variant == "unpenalized-const":
            WU = W * self.u
            s = WU @ self.u
            b = (WU @ z) / s
            coef = W * (z[None, :] - b[:, None] * self.u[None, :])
            trace = self.n - lambdas * (np.sum(W, axis=1) - np.sum(WU**2, axis=1) / s)
        else:
            raise ValueError(f"unknown variant {variant!r}")
        fitted = (coef * self.d) @ self.V.T + b[:, None]
        return fitted, trace


def fit_penalized(data: RegressionData, spec: KernelSpec, lam: float, sigma_sq: float = 1.0) -> FitResult:
    return SpectralSmoother(data.x, spec).fit(data.y, lam, "penalized", sigma_sq)


def fit_unpenalized_constant(data: RegressionData, spec: KernelSpec, lam: float, sigma_sq: float = 1.0) -> FitResult:
    return SpectralSmoother(data.x, spec).fit(data.y, lam, "unpenalized-const", sigma_sq)


def cp_score(fit: FitResult, data: RegressionData, sigma_sq: float = 1.0) -> float:
    """Mallows' C_p: ``||y - f_hat||^2 / n + (2 sigma^2 / n) tr(S)``."""
    n = data.n
    return float(np.sum((data.y - fit.fitted) ** 2) / n + 2.0 * sigma_sq * fit.smoother_trace / n)


@dataclass(frozen=True)
class TunedFit:
    fit: FitResult
    lam: float
    omega: float | None
    cp_table: NDArray[np.float64] = field(repr=False)  # (len(omegas), len(lambdas))


def _spec_for(kind: str, omega: float | None) -> KernelSpec:
    if kind == "periodic_spline":
        return KernelSpec.periodic_spline()
    return KernelSpec(kind, omega)


def tune_fit(
    data: RegressionData,
    lambda_grid: Sequence[float],
    omega_grid: Sequence[float] | None,
    variant: str = "penalized",
    kind: str = "periodic_gaussian",
    sigma_sq: float = 1.0,
    smoothers: Callable[[NDArray, KernelSpec], SpectralSmoother] | None = None,
) -> TunedFit:
    """Exhaustive C_p search; ties go to larger lambda, then smaller omega.

    ``omega_grid`` is ignored for the spline kernel. ``smoothers`` lets a
    caller supply cached decompositions for repeated designs.
    """
    lambdas = np.asarray(lambda_grid, dtype=float)
    if lambdas.size == 0:
        raise ValueError("lambda grid must be nonempty")
    omegas: list[float | None] = [None] if kind == "periodic_spline" else list(omega_grid or [])
    if not omegas:
        raise ValueError("omega grid must be nonempty")
    make = smoothers or SpectralSmoother
    table = np.empty((len(omegas), lambdas.size))
    best = None
    for i, om in enumerate(omegas):
        sm = make(data.x, _spec_for(kind, om))
        fitted, trace = sm.fitted_many(data.y, lambdas, variant)
        table[i] = np.sum((data.y - fitted) ** 2, axis=1) / data.n + 2.0 * sigma_sq * trace / data.n
        for j in range(lambdas.size):
            key = (table[i, j], -lambdas[j], om if om is not None else 0.0)
            if best is None or key < best[0]:
                best = (key, sm, om, lambdas[j])
    _, sm, om, lam = best
    fit = sm.fit(data.y, float(lam), variant, sigma_sq)
    return TunedFit(fit, float(lam), om, table)


def predict(fit: FitResult, x_new: ArrayLike):
    """``sum_j c_j kernel(x_j - x) + b``."""
    x = np.asarray(x_new, dtype=float)
    vals = cross_kernel(np.atleast_1d(x).ravel(), fit.design, fit.spec) @ fit.c + fit.b
    return float(vals[0]) if x.ndim == 0 else vals.reshape(x.shape)


def average_squared_error(fitted: FitResult | ArrayLike, truth: Callable | ArrayLike, x: ArrayLike | None = None) -> float:
    """``(1/n) sum_j (f_hat(x_j) - f(x_j))^2`` at the design points."""
    if isinstance(fitted, FitResult):
        x = fitted.design if x is None else x
        fitted = fitted.fitted
    fitted = np.asarray(fitted, dtype=float)
    if callable(truth):
        if x is None:
            raise ValueError("design points needed to evaluate a callable truth")
        truth = truth(np.asarray(x, dtype=float))
    truth = np.asarray(truth, dtype=float)
    return float(np.mean((fitted - truth) ** 2))
