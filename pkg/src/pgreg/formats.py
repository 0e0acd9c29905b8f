"""CSV and JSON formats used by the command line."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .harness import ContourGrid
from .kernels import KernelSpec
from .regression import FitResult, RegressionData


def fmt(v: float) -> str:
    return format(float(v), ".17g")


def read_xy_csv(path: str | Path) -> RegressionData:
    """Read a headed CSV with columns ``x`` and ``y``."""
    xs, ys = _read_columns(path, ("x", "y"))
    return RegressionData(np.asarray(xs), np.asarray(ys))


def read_x_csv(path: str | Path) -> np.ndarray:
    (xs,) = _read_columns(path, ("x",))
    return np.asarray(xs)


def _read_columns(path, names):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not set(names) <= set(reader.fieldnames):
            raise ValueError(f"{path}: expected a header with columns {', '.join(names)}")
        cols = [[] for _ in names]
        for lineno, row in enumerate(reader, start=2):
            try:
                for col, name in zip(cols, names):
                    col.append(float(row[name]))
            except (TypeError, ValueError):
                raise ValueError(f"{path}:{lineno}: malformed number") from None
    return cols


def write_csv(path: str | Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(v if isinstance(v, str) else (str(v) if isinstance(v, (int, np.integer)) else fmt(v))
                              for v in row) + "\n")


def write_json(path: str | Path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def model_to_dict(fit: FitResult) -> dict:
    spec = fit.spec
    return {
        "design": [float(v) for v in fit.design],
        "c": [float(v) for v in fit.c],
        "b": float(fit.b),
        "lambda": float(fit.lam),
        "omega": spec.omega,
        "kind": spec.kind,
        "variant": fit.variant,
        "cp": float(fit.cp),
        "kernel": spec.to_dict(),
    }


def model_from_dict(d: dict) -> FitResult:
    """Rebuild enough of a :class:`FitResult` to call :func:`predict`."""
    try:
        spec = KernelSpec.from_dict(d.get("kernel") or {"kind": d["kind"], "omega": d.get("omega")})
        design = np.asarray(d["design"], dtype=float)
        c = np.asarray(d["c"], dtype=float)
        if design.shape != c.shape:
            raise ValueError("model design and coefficients differ in length")
        return FitResult(c, float(d["b"]), np.full(design.size, np.nan), float("nan"), float(d["lambda"]),
                         spec, float(d.get("cp", float("nan"))), design, d.get("variant", "penalized"))
    except KeyError as exc:
        raise ValueError(f"model file missing field {exc}") from None


def contour_rows(grid: ContourGrid):
    for i, k1 in enumerate(grid.k1):
        for j, k2 in enumerate(grid.k2):
            yield (int(k1), int(k2), grid.omegas[i], grid.lambdas[j], grid.ase[i, j])
