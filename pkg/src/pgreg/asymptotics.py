"""Pinsker's linear minimax program and closed-form asymptotic risks.

All risks are on the sequence-model scale (noise variance ``1/n`` per
coefficient).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .sequence import Ellipsoid, Penalty
from .shrinkage import shrink_weights, truncation_index


@dataclass(frozen=True)
class PinskerSolution:
    mu: float
    k: int  # number of active coordinates (a_l < mu)
    risk: float
    residual: float


def _ellipsoid_axes(spec: Ellipsoid, n: float, Q: float) -> NDArray[np.float64]:
    # leading a_l, long enough that the root mu lies below the last entry
    size = 16
    while True:
        with np.errstate(over="ignore"):
            a = spec.pinsker_weight(np.arange(size))
        a = a[np.isfinite(a)]
        if a.size < size or _constraint(a, a[-1], n) >= Q:
            return a
        size *= 2


def _constraint(a: NDArray, mu: float, n: float) -> float:
    return float(np.sum(a * np.clip(mu - a, 0.0, None)) / n)


def _solve_weights(a: NDArray, Q: float, n: float, rtol: float) -> float:
    lo = float(a.min())
    hi = max(2.0 * lo, lo + 1.0)
    while _constraint(a, hi, n) < Q:
        lo, hi = hi, 2.0 * hi
    # exact solve on the linear piece, bisection only to locate the piece
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _constraint(a, mid, n) < Q:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rtol * hi:
            break
    active = a[a < hi]
    mu = (n * Q + np.sum(active**2)) / np.sum(active)
    # the closed form is exact when the active set is right; fall back otherwise
    if not (np.all(active < mu) and np.all(a[a >= hi] >= mu)):
        mu = 0.5 * (lo + hi)
    return float(mu)


def pinsker_solve(spec: Ellipsoid | ArrayLike, n: float, Q: float | None = None, rtol: float = 1e-12) -> PinskerSolution:
    """Solve ``(1/n) sum a_l (mu - a_l)_+ = Q`` and return the linear minimax risk.

    ``spec`` is an :class:`Ellipsoid` (``a_l = sqrt(rho_l)``, ``Q`` from the
    spec) or an explicit finite nondecreasing sequence of ``a_l`` together
    with ``Q``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(spec, Ellipsoid):
        Q = spec.Q if Q is None else Q
        a = _ellipsoid_axes(spec, n, Q)
    else:
        if Q is None:
            raise ValueError("Q required with an explicit weight sequence")
        a = np.asarray(spec, dtype=float)
        if np.any(np.diff(a) < 0) or np.any(a <= 0):
            raise ValueError("weights must be positive and nondecreasing")
    mu = _solve_weights(a, Q, n, rtol)
    active = a[a < mu]
    risk = float(np.sum(1.0 - active / mu) / n)
    return PinskerSolution(mu, int(active.size), risk, abs(_constraint(a, mu, n) - Q))


def asymptotic_minimax_Hinf(omega: float, n: float) -> float:
    """``2 sqrt(2) / (omega n) * sqrt(log n)``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return 2.0 * math.sqrt(2.0) / (omega * n) * math.sqrt(math.log(n))


def _check_m(m: float) -> None:
    if m < 1:
        raise ValueError("Sobolev order m must be >= 1")


def gauss_risk_Hm(m: float, Q: float, n: float) -> float:
    """Best worst-case risk of the periodic Gaussian regularizer over ``H^m(Q)``."""
    _check_m(m)
    e = 2.0 * m / (2.0 * m + 1.0)
    return (2 * m + 1) * m ** (-e) * Q ** (1.0 / (2 * m + 1)) * n ** (-e)


def optimal_log_inv_lambda_Hm(m: float, Q: float, n: float, omega: float) -> float:
    """``log(1/lambda)`` attaining :func:`gauss_risk_Hm`."""
    _check_m(m)
    return omega**2 * (m * n * Q) ** (2.0 / (2 * m + 1)) / 2.0


def minimax_Hm(m: float, Q: float, n: float) -> float:
    """Pinsker's asymptotic minimax risk over ``H^m(Q)``."""
    _check_m(m)
    e = 2.0 * m / (2.0 * m + 1.0)
    return (2 * m / (m + 1)) ** e * (2 * m + 1) ** (1.0 / (2 * m + 1)) * Q ** (1.0 / (2 * m + 1)) * n ** (-e)


def risk_analytic(alpha: float, n: float) -> float:
    """``2 log(n) / (alpha n)``, minimax over ``A_alpha(Q)``."""
    if alpha <= 0 or n < 2:
        raise ValueError("need alpha > 0 and n >= 2")
    return 2.0 * math.log(n) / (alpha * n)


def optimal_log_inv_lambda_analytic(alpha: float, n: float, omega: float) -> float:
    if alpha <= 0 or n < 2:
        raise ValueError("need alpha > 0 and n >= 2")
    return omega**2 * math.log(n) ** 2 / (2.0 * alpha**2)


@dataclass(frozen=True)
class Efficiency:
    risk_ratio: float
    sample_efficiency: float


def efficiency_Hm(m: float) -> Efficiency:
    """Constant efficiency of the periodic Gaussian regularizer over ``H^m``.

    Risks scale as ``C n^(-2m/(2m+1))``, so equal risk needs a sample size
    ratio of ``(C_gauss / C_minimax)^((2m+1)/(2m))``.
    """
    _check_m(m)
    ratio = gauss_risk_Hm(m, 1.0, 1.0) / minimax_Hm(m, 1.0, 1.0)
    return Efficiency(ratio, ratio ** (-(2 * m + 1) / (2 * m)))


def risk_bound_Hinf(lam: float, omega: float, n: float, Q: float) -> float:
    """Variance asymptote plus the ``lambda Q / 4`` squared-bias bound over ``H_omega^inf(Q)``."""
    if not 0 < lam < 1:
        raise ValueError("need 0 < lambda < 1")
    return 2.0 * math.sqrt(2.0) / (omega * n) * math.sqrt(-math.log(lam)) + lam * Q / 4.0


def worst_case_risk(lam: float, penalty: Penalty, spec: Ellipsoid, n: float) -> float:
    """Exact maximum risk of the filter ``(1 + lam beta)^-1`` over an ellipsoid.

    The squared bias is maximized by putting all of ``Q`` on the single
    coordinate maximizing ``(1 - tau_l)^2 / rho_l``.
    """
    L = truncation_index(lam, penalty)
    tau = shrink_weights(lam, penalty, L).tau
    rho = spec.weight(np.arange(L + 1))
    worst_bias = spec.Q * float(np.max((1.0 - tau) ** 2 / rho))
    # beyond L, tau ~ 0 and (1 - tau)^2 / rho <= 1 / rho_L is already covered
    worst_bias = max(worst_bias, spec.Q / float(rho[-1]))
    return float(np.sum(tau[::-1] ** 2) / n) + worst_bias
