"""Closed-form kernels on the circle and their Gram matrices.

The wrapped Gaussian ``G^J(r) = sum_{|k|<=J} G(r - 2 k pi)`` is the working
form of the periodic Gaussian reproducing kernel. By Poisson summation it
equals ``1/(2 pi) + (1/pi) sum_l exp(-l^2 omega^2 / 2) cos(l r)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

TWO_PI = 2.0 * math.pi
SPLINE_TERMS = 10_000


def wrap(r: ArrayLike) -> NDArray[np.float64]:
    """Reduce angles to ``(-pi, pi]``."""
    r = np.asarray(r, dtype=float)
    out = r - TWO_PI * np.round(r / TWO_PI)
    return np.where(out <= -math.pi, out + TWO_PI, out)


def auto_wrap_terms(omega: float) -> int:
    """Smallest ``J >= 1`` with ``2J + 1 >= 3 omega``."""
    return max(1, math.ceil((3.0 * omega - 1.0) / 2.0))


def auto_fourier_terms(omega: float, tol: float = 1e-18) -> int:
    """Number of cosine terms after which ``exp(-l^2 omega^2 / 2) < tol``."""
    return max(1, math.ceil(math.sqrt(-2.0 * math.log(tol)) / omega))


def gauss_density(r: ArrayLike, omega: float):
    """Density of ``N(0, omega^2)`` at ``r``."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    r = np.asarray(r, dtype=float)
    out = np.exp(-(r**2) / (2.0 * omega**2)) / (math.sqrt(TWO_PI) * omega)
    return float(out) if out.ndim == 0 else out


def wrapped_gauss(r: ArrayLike, omega: float, J: int | None = None):
    """Periodized Gaussian truncated to ``2J + 1`` images.

    ``J`` is raised to :func:`auto_wrap_terms` when smaller.
    """
    J = max(J or 1, auto_wrap_terms(omega))
    r = wrap(r)
    # outermost images first so the dominant terms are added last
    total = np.zeros_like(r)
    for k in range(J, 0, -1):
        total += gauss_density(r - TWO_PI * k, omega) + gauss_density(r + TWO_PI * k, omega)
    total += gauss_density(r, omega)
    return float(total) if total.ndim == 0 else total


def fourier_kernel(r: ArrayLike, omega: float, L: int | None = None):
    """Cosine-series form ``1/(2 pi) + (1/pi) sum_{l<=L} exp(-l^2 omega^2/2) cos(l r)``."""
    L = L if L is not None else auto_fourier_terms(omega)
    if L < 1:
        raise ValueError("L must be >= 1")
    r = np.asarray(r, dtype=float)
    total = np.zeros_like(r)
    for l in range(L, 0, -1):
        total += math.exp(-(l**2) * omega**2 / 2.0) * np.cos(l * r)
    total = total / math.pi + 1.0 / TWO_PI
    return float(total) if total.ndim == 0 else total


def spline_kernel(r: ArrayLike, L_s: int = SPLINE_TERMS, chunk: int = 256):
    """Periodic cubic-spline kernel ``(1/pi) sum_{l<=L_s} l^-4 cos(l r)``.

    The truncation error is below ``L_s^-3 / (3 pi)``.
    """
    if L_s < 100:
        raise ValueError("spline series needs L_s >= 100")
    r = np.asarray(r, dtype=float)
    flat = wrap(r).ravel()
    # smallest terms first
    l = np.arange(L_s, 0, -1, dtype=float)
    w = l**-4
    out = np.empty_like(flat)
    for start in range(0, flat.size, chunk):
        seg = flat[start:start + chunk]
        out[start:start + chunk] = np.cos(np.outer(seg, l)) @ w
    out = out.reshape(r.shape) / math.pi
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class KernelSpec:
    """Kernel choice.

    ``kind`` is ``"periodic_gaussian"`` (``omega``, optional ``J``),
    ``"plain_gaussian"`` (``omega``; evaluated on raw differences, no
    wrapping) or ``"periodic_spline"`` (``series_length``).
    """

    kind: str
    omega: float | None = None
    J: int | None = None
    series_length: int = SPLINE_TERMS

    def __post_init__(self):
        if self.kind not in ("periodic_gaussian", "plain_gaussian", "periodic_spline"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind != "periodic_spline":
            if self.omega is None or self.omega <= 0:
                raise ValueError("omega must be positive")
        if self.kind == "periodic_gaussian":
            object.__setattr__(self, "J", max(self.J or 1, auto_wrap_terms(self.omega)))
        if self.kind == "periodic_spline" and self.series_length < 100:
            raise ValueError("series_length must be >= 100")

    @classmethod
    def periodic_gaussian(cls, omega: float, J: int | None = None) -> "KernelSpec":
        return cls("periodic_gaussian", omega, J)

    @classmethod
    def plain_gaussian(cls, omega: float) -> "KernelSpec":
        return cls("plain_gaussian", omega)

    @classmethod
    def periodic_spline(cls, series_length: int = SPLINE_TERMS) -> "KernelSpec":
        return cls("periodic_spline", series_length=series_length)

    @property
    def periodic(self) -> bool:
        return self.kind != "plain_gaussian"

    def __call__(self, r: ArrayLike):
        if self.kind == "periodic_gaussian":
            return wrapped_gauss(r, self.omega, self.J)
        if self.kind == "plain_gaussian":
            return gauss_density(r, self.omega)
        return spline_kernel(r, self.series_length)

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == "periodic_spline":
            d["series_length"] = self.series_length
        else:
            d["omega"] = self.omega
        if self.kind == "periodic_gaussian":
            d["J"] = self.J
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "KernelSpec":
        return cls(d["kind"], d.get("omega"), d.get("J"), d.get("series_length", SPLINE_TERMS))


@dataclass(frozen=True)
class GramMatrix:
    K: NDArray[np.float64]
    design: NDArray[np.float64]
    spec: KernelSpec


def cross_kernel(x: ArrayLike, z: ArrayLike, spec: KernelSpec) -> NDArray[np.float64]:
    """Matrix ``kernel(x_i - z_j)``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    z = np.atleast_1d(np.asarray(z, dtype=float))
    return np.asarray(spec(x[:, None] - z[None, :]), dtype=float).reshape(x.size, z.size)


def gram(design: ArrayLike, spec: KernelSpec) -> GramMatrix:
    x = np.atleast_1d(np.asarray(design, dtype=float))
    if x.size == 0:
        raise ValueError("design must be nonempty")
    if not np.all(np.isfinite(x)):
        raise ValueError("design must be finite")
    if spec.kind == "periodic_spline":
        # only the upper triangle; the series is the expensive part
        iu = np.triu_indices(x.size)
        vals = spec(x[iu[0]] - x[iu[1]])
        K = np.empty((x.size, x.size))
        K[iu] = vals
        K[(iu[1], iu[0])] = vals
    else:
        K = cross_kernel(x, x, spec)
        K = 0.5 * (K + K.T)
    return GramMatrix(K, x, spec)
