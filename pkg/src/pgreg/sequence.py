"""Trigonometric basis, Fourier analysis/synthesis and weight sequences.

Index convention: a flat index ``l`` with frequency ``k = ceil(l / 2)``.
``l = 0`` is the constant, odd ``l = 2k - 1`` is ``sin(kt)`` and even
``l = 2k`` is ``cos(kt)``; sine and cosine of one frequency share a weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

SQRT_PI = math.sqrt(math.pi)
SQRT_2PI = math.sqrt(2.0 * math.pi)


class TruncationError(ValueError):
    """Raised when a grid is too coarse for the requested number of coefficients."""


def frequency(l: ArrayLike) -> NDArray[np.int64]:
    """Frequency ``ceil(l/2)`` of flat basis index ``l``."""
    l = np.asarray(l, dtype=np.int64)
    if np.any(l < 0):
        raise ValueError("basis index must be nonnegative")
    return (l + 1) // 2


def basis_eval(l: int, t: ArrayLike) -> NDArray[np.float64] | float:
    """Evaluate the orthonormal trigonometric basis function ``phi_l`` at ``t``."""
    if l < 0:
        raise ValueError("basis index must be nonnegative")
    t = np.asarray(t, dtype=float)
    if l == 0:
        out = np.full_like(t, 1.0 / SQRT_2PI)
    else:
        k = (l + 1) // 2
        out = (np.sin(k * t) if l % 2 == 1 else np.cos(k * t)) / SQRT_PI
    return float(out) if out.ndim == 0 else out


def basis_matrix(L: int, t: ArrayLike) -> NDArray[np.float64]:
    """Rows ``phi_0(t) .. phi_L(t)``; shape ``(L + 1, len(t))``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty((L + 1, t.size))
    out[0] = 1.0 / SQRT_2PI
    for k in range(1, L // 2 + 1):
        out[2 * k - 1] = np.sin(k * t) / SQRT_PI
        if 2 * k <= L:
            out[2 * k] = np.cos(k * t) / SQRT_PI
    if L % 2 == 1:
        k = (L + 1) // 2
        out[L] = np.sin(k * t) / SQRT_PI
    return out


def synthesize(coeffs: ArrayLike, t: ArrayLike) -> NDArray[np.float64] | float:
    """Evaluate ``sum_l theta_l phi_l(t)``."""
    theta = np.asarray(coeffs, dtype=float)
    t_arr = np.asarray(t, dtype=float)
    vals = theta @ basis_matrix(theta.size - 1, t_arr.ravel())
    return float(vals[0]) if t_arr.ndim == 0 else vals.reshape(t_arr.shape)


def equidistant_grid(N: int) -> NDArray[np.float64]:
    """``N`` equidistant points ``-pi + 2 pi j / N``, ``j = 1..N``, on ``(-pi, pi]``."""
    return -np.pi + 2.0 * np.pi * np.arange(1, N + 1) / N


def analyze(t: ArrayLike, values: ArrayLike, L: int) -> NDArray[np.float64]:
    """Fourier coefficients ``theta_0..theta_L`` from samples on an equidistant grid.

    Uses the rectangle rule, which is exact for trigonometric polynomials
    whose product with ``phi_L`` has degree below ``N``.
    """
    t = np.asarray(t, dtype=float)
    values = np.asarray(values, dtype=float)
    N = t.size
    if values.shape != t.shape:
        raise ValueError("t and values must have the same shape")
    if N < 2 * L + 2:
        raise TruncationError(f"grid of size {N} cannot resolve L={L}; need N >= {2 * L + 2}")
    steps = np.diff(np.sort(t))
    h = 2.0 * np.pi / N
    if not np.allclose(steps, h, rtol=0, atol=1e-9):
        raise ValueError("grid must be equidistant with spacing 2*pi/N")
    return h * (basis_matrix(L, t) @ values)


def analyze_function(f, L: int, N: int | None = None) -> NDArray[np.float64]:
    """Convenience wrapper: sample ``f`` on an equidistant grid and analyze."""
    N = N if N is not None else max(256, 4 * L + 4)
    t = equidistant_grid(N)
    return analyze(t, f(t), L)


@dataclass(frozen=True)
class Ellipsoid:
    """Coefficient ellipsoid ``sum rho_l theta_l^2 <= Q``.

    ``kind`` is ``"sobolev"`` (param ``m``), ``"analytic"`` (param ``alpha``)
    or ``"infinite_order"`` (param ``omega``).
    """

    kind: str
    param: float
    Q: float = 1.0

    def __post_init__(self):
        if self.kind not in ("sobolev", "analytic", "infinite_order"):
            raise ValueError(f"unknown ellipsoid kind {self.kind!r}")
        if self.kind == "sobolev" and self.param < 1:
            raise ValueError("Sobolev order must be >= 1")
        if self.param <= 0 or self.Q <= 0:
            raise ValueError("ellipsoid parameters must be positive")

    def weight(self, l: ArrayLike) -> NDArray[np.float64]:
        k = frequency(l).astype(float)
        if self.kind == "sobolev":
            return k ** (2 * self.param) + 1.0
        if self.kind == "analytic":
            with np.errstate(over="ignore"):
                return np.exp(self.param * k)
        with np.errstate(over="ignore"):
            return np.exp(k**2 * self.param**2 / 2.0)

    def pinsker_weight(self, l: ArrayLike) -> NDArray[np.float64]:
        """``a_l = sqrt(rho_l)``, the semi-axis weights used by Pinsker's program."""
        return np.sqrt(self.weight(l))

    def norm_sq(self, theta: ArrayLike) -> float:
        theta = np.asarray(theta, dtype=float)
        return float(np.sum(self.weight(np.arange(theta.size)) * theta**2))

    def contains(self, theta: ArrayLike) -> bool:
        return self.norm_sq(theta) <= self.Q


def ellipsoid_weight(spec: Ellipsoid, l: int) -> float:
    return float(spec.weight(l))


@dataclass(frozen=True)
class Penalty:
    """Regularizer weights ``beta_l`` of ``lambda * sum beta_l theta_l^2``.

    Use the classmethod constructors; ``param`` is omega, alpha or the spline
    order ``m`` (``beta = k^(2m)``) depending on ``kind``.
    """

    kind: str
    param: float
    penalize_constant: bool = True

    def __post_init__(self):
        if self.kind not in ("periodic_gaussian", "analytic", "spline"):
            raise ValueError(f"unknown penalty kind {self.kind!r}")
        if self.param <= 0:
            raise ValueError("penalty parameter must be positive")

    @classmethod
    def periodic_gaussian(cls, omega: float, penalize_constant: bool = True) -> "Penalty":
        return cls("periodic_gaussian", omega, penalize_constant)

    @classmethod
    def analytic(cls, alpha: float, penalize_constant: bool = True) -> "Penalty":
        return cls("analytic", alpha, penalize_constant)

    @classmethod
    def spline(cls, m: int = 2, penalize_constant: bool = False) -> "Penalty":
        return cls("spline", m, penalize_constant)

    def weight(self, l: ArrayLike) -> NDArray[np.float64]:
        k = frequency(l).astype(float)
        # overflow to inf is intended: the matching tau is exactly 0
        with np.errstate(over="ignore"):
            if self.kind == "periodic_gaussian":
                beta = np.exp(k**2 * self.param**2 / 2.0)
            elif self.kind == "analytic":
                beta = np.exp(self.param * k)
            else:
                beta = k ** (2 * self.param)
        beta0 = 1.0 if self.penalize_constant else 0.0
        return np.where(k == 0, beta0, beta)


def penalty_weight(spec: Penalty, l: int) -> float:
    return float(spec.weight(l))


@dataclass(frozen=True)
class SequenceObservations:
    """Observations ``y_l = theta_l + eps_l`` with ``eps_l ~ N(0, 1/n)``."""

    y: NDArray[np.float64]
    n: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))

    def __len__(self) -> int:
        return self.y.size


def sample_observations(coeffs: ArrayLike, n: float, rng: np.random.Generator) -> SequenceObservations:
    """Draw one sequence-model observation vector around ``coeffs``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    theta = np.asarray(coeffs, dtype=float)
    return SequenceObservations(theta + rng.standard_normal(theta.size) / math.sqrt(n), n)
