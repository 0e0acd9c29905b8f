"""Regularization estimator in the Gaussian sequence model.

The estimator is the diagonal filter ``theta_hat_l = tau_l y_l`` with
``tau_l = 1 / (1 + lambda * beta_l)``. Smoothing parameters are chosen by
minimizing the unbiased risk estimate over a (lambda, omega) grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .sequence import Penalty, SequenceObservations

TAU_FLOOR = 1e-16


@dataclass(frozen=True)
class ShrinkageProfile:
    lam: float
    penalty: Penalty
    tau: NDArray[np.float64]

    def __len__(self) -> int:
        return self.tau.size


@dataclass(frozen=True)
class RiskBreakdown:
    variance: float
    bias_sq: float

    @property
    def total(self) -> float:
        return self.variance + self.bias_sq


def truncation_index(lam: float, penalty: Penalty, tol: float = TAU_FLOOR, max_index: int = 10**7) -> int:
    """Smallest even index ``L`` with ``tau_L < tol``.

    Because ``tau`` is nonincreasing in frequency every dropped term is below
    ``tol`` as well.
    """
    if lam <= 0:
        raise ValueError("lambda must be positive for an adaptive truncation")
    # need beta_L > (1/tol - 1) / lam
    target = (1.0 / tol - 1.0) / lam
    p = penalty.param
    if penalty.kind == "periodic_gaussian":
        k = math.sqrt(2.0 * math.log(max(target, 1.0))) / p
    elif penalty.kind == "analytic":
        k = math.log(max(target, 1.0)) / p
    else:
        k = target ** (1.0 / (2 * p))
    k = max(1, math.ceil(k))
    # guard against rounding at the boundary
    while 1.0 / (1.0 + lam * float(penalty.weight(2 * k))) >= tol:
        k += 1
    L = 2 * k
    if L > max_index:
        raise ValueError(f"adaptive truncation L={L} exceeds max_index={max_index}; pass L explicitly")
    return L


def shrink_weights(lam: float, penalty: Penalty, L: int | None = None) -> ShrinkageProfile:
    """Shrinkage weights ``tau_0..tau_L``.

    ``lam = 0`` gives the identity filter and ``lam = inf`` the limiting
    filter that keeps only unpenalized coordinates. ``L`` defaults to
    :func:`truncation_index`.
    """
    if lam < 0 or math.isnan(lam):
        raise ValueError("lambda must be nonnegative")
    if L is None:
        if lam == 0 or math.isinf(lam):
            raise ValueError("explicit L required for lambda = 0 or inf")
        L = truncation_index(lam, penalty)
    beta = penalty.weight(np.arange(L + 1))
    if math.isinf(lam):
        tau = np.where(beta > 0, 0.0, 1.0)
    else:
        tau = 1.0 / (1.0 + lam * beta)
    return ShrinkageProfile(lam, penalty, tau)


def apply(profile: ShrinkageProfile, obs: SequenceObservations | ArrayLike) -> NDArray[np.float64]:
    y = obs.y if isinstance(obs, SequenceObservations) else np.asarray(obs, dtype=float)
    if y.size != profile.tau.size:
        raise ValueError(f"length mismatch: profile has {profile.tau.size}, observations {y.size}")
    return profile.tau * y


def _pad(theta: NDArray, size: int) -> NDArray:
    if theta.size > size:
        raise ValueError("coefficient vector longer than the profile")
    return np.pad(theta, (0, size - theta.size))


def exact_risk(theta: ArrayLike, profile: ShrinkageProfile, n: float) -> RiskBreakdown:
    """Variance ``(1/n) sum tau^2`` and squared bias ``sum (1 - tau)^2 theta^2``.

    ``theta`` shorter than the profile is zero padded.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    tau = profile.tau
    theta = _pad(np.asarray(theta, dtype=float), tau.size)
    return RiskBreakdown(
        variance=float(np.sum(tau**2) / n),
        bias_sq=float(np.sum((1.0 - tau) ** 2 * theta**2)),
    )


def unbiased_risk_estimate(obs: SequenceObservations, profile: ShrinkageProfile) -> float:
    """``sum (tau^2 - 2 tau) y^2 + (2/n) tau``.

    Unbiased for the risk minus ``sum theta^2``.
    """
    tau = profile.tau
    if tau.size != obs.y.size:
        raise ValueError(f"length mismatch: profile has {tau.size}, observations {obs.y.size}")
    return float(np.sum((tau**2 - 2.0 * tau) * obs.y**2 + (2.0 / obs.n) * tau))


def _unbiased_risk_many(y2: NDArray, n: float, beta: NDArray, lambdas: NDArray) -> NDArray:
    tau = 1.0 / (1.0 + np.outer(lambdas, beta))
    return np.sum((tau**2 - 2.0 * tau) * y2 + (2.0 / n) * tau, axis=1)


@dataclass(frozen=True)
class TuningGrid:
    lambdas: tuple[float, ...]
    omegas: tuple[float, ...]

    def __post_init__(self):
        lam = tuple(float(v) for v in self.lambdas)
        om = tuple(float(v) for v in self.omegas)
        if not lam or not om:
            raise ValueError("tuning grid must be nonempty")
        if min(lam) <= 0 or min(om) <= 0:
            raise ValueError("grid values must be positive")
        if len(set(lam)) != len(lam) or len(set(om)) != len(om):
            raise ValueError("grid values must be distinct")
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "omegas", om)

    @classmethod
    def default(cls, omegas=(0.5, 1.0, 1.5, 2.0), num: int = 81) -> "TuningGrid":
        """Log-spaced lambda on ``[1e-8, 1]``."""
        return cls(tuple(np.logspace(-8, 0, num)), tuple(omegas))


@dataclass(frozen=True)
class TuneResult:
    lambda_star: float
    omega_star: float
    score: float
    estimate: NDArray[np.float64]
    scores: NDArray[np.float64] = field(repr=False)


def tune(
    obs: SequenceObservations,
    grid: TuningGrid,
    penalty_family: str = "periodic_gaussian",
    penalize_constant: bool = True,
) -> TuneResult:
    """Exhaustive minimization of the unbiased risk estimate over ``grid``.

    For ``penalty_family="analytic"`` the grid's ``omegas`` are read as alpha.
    Ties go to the larger lambda, then the smaller omega. ``scores`` has
    shape ``(len(omegas), len(lambdas))``.
    """
    if penalty_family not in ("periodic_gaussian", "analytic"):
        raise ValueError(f"unsupported penalty family {penalty_family!r}")
    lambdas = np.asarray(grid.lambdas)
    idx = np.arange(obs.y.size)
    y2 = obs.y**2
    scores = np.empty((len(grid.omegas), lambdas.size))
    for i, om in enumerate(grid.omegas):
        beta = Penalty(penalty_family, om, penalize_constant).weight(idx)
        scores[i] = _unbiased_risk_many(y2, obs.n, beta, lambdas)
    best = min(
        ((scores[i, j], -lambdas[j], grid.omegas[i], i, j)
         for i in range(scores.shape[0]) for j in range(scores.shape[1])),
    )
    _, _, _, i, j = best
    lam, om = float(lambdas[j]), float(grid.omegas[i])
    profile = shrink_weights(lam, Penalty(penalty_family, om, penalize_constant), L=obs.y.size - 1)
    return TuneResult(lam, om, unbiased_risk_estimate(obs, profile), apply(profile, obs), scores)


def variance_sum(lam: float, omega: float, n: float) -> float:
    """Exact ``(1/n) sum_l (1 + lam beta_l)^-2`` for the periodic Gaussian penalty."""
    if not 0 < lam:
        raise ValueError("lambda must be positive")
    pen = Penalty.periodic_gaussian(omega)
    L = truncation_index(lam, pen)
    tau = shrink_weights(lam, pen, L).tau
    return float(np.sum(tau[::-1] ** 2) / n)


def asymptotic_variance(lam: float, omega: float, n: float) -> float:
    """Leading-order variance ``2 sqrt(2) / (omega n) * sqrt(-log lam)``."""
    if not 0 < lam < 1:
        raise ValueError("asymptotic variance needs 0 < lambda < 1")
    return 2.0 * math.sqrt(2.0) / (omega * n) * math.sqrt(-math.log(lam))
