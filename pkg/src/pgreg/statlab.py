"""Seeded random streams, the paired t-test and small summary helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import betainc


def make_stream(master_seed: int, stream_id: int = 0) -> np.random.Generator:
    """Independent generator determined by ``(master_seed, stream_id)``."""
    ss = np.random.SeedSequence(int(master_seed), spawn_key=(int(stream_id),))
    return np.random.Generator(np.random.PCG64(ss))


def standard_normal(stream: np.random.Generator, size=None):
    return stream.standard_normal(size)


def student_t_cdf(t: float, df: float) -> float:
    """Student-t distribution function via the regularized incomplete beta."""
    if df <= 0:
        raise ValueError("df must be positive")
    if math.isinf(t):
        return 1.0 if t > 0 else 0.0
    tail = 0.5 * float(betainc(df / 2.0, 0.5, df / (df + t * t)))
    return 1.0 - tail if t >= 0 else tail


@dataclass(frozen=True)
class PairedTestResult:
    t_stat: float
    df: int
    p_value: float
    mean_diff: float
    degenerate: bool = False


def paired_t_test(a: ArrayLike, b: ArrayLike) -> PairedTestResult:
    """Two-sided paired t-test on ``d = a - b``.

    Differences with zero spread are flagged ``degenerate``: all-zero
    differences give ``t = 0, p = 1`` and a nonzero constant difference
    gives ``t = +-inf, p = 0``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("a and b must be 1-d and of equal length")
    if a.size < 2:
        raise ValueError("need at least two pairs")
    d = a - b
    df = d.size - 1
    mean = float(np.mean(d))
    sd = float(np.std(d, ddof=1))
    if sd == 0.0:
        if mean == 0.0:
            return PairedTestResult(0.0, df, 1.0, 0.0, degenerate=True)
        return PairedTestResult(math.copysign(math.inf, mean), df, 0.0, mean, degenerate=True)
    t = mean / (sd / math.sqrt(d.size))
    p = float(betainc(df / 2.0, 0.5, df / (df + t * t)))
    return PairedTestResult(t, df, min(1.0, p), mean)


def mean_sd(xs: ArrayLike) -> tuple[float, float]:
    xs = np.asarray(xs, dtype=float)
    if xs.size < 2:
        raise ValueError("need at least two values for a sample standard deviation")
    return float(np.mean(xs)), float(np.std(xs, ddof=1))
