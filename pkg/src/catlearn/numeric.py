"""Dimension-checked real vectors, seeded sampling and the finite-difference oracle.

Vectors are plain 1-D ``float64`` numpy arrays.  ``R^0`` is the empty array.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .exceptions import DimensionError, NonFiniteError

Vec = np.ndarray

DEFAULT_STEP = 1e-6


def vec(data, dim: int | None = None, what: str = "vector") -> Vec:
    """Return ``data`` as a finite 1-D float array, checking ``dim`` if given."""
    x = np.asarray(data, dtype=np.float64)
    if x.ndim == 0:
        x = x.reshape(1)
    elif x.ndim != 1:
        raise DimensionError(f"{what} must be one-dimensional, got shape {x.shape}")
    if dim is not None and x.shape[0] != dim:
        raise DimensionError(
            f"{what} has dimension {x.shape[0]}, expected {dim}",
            expected=dim, actual=x.shape[0])
    if not np.all(np.isfinite(x)):
        bad = int(np.flatnonzero(~np.isfinite(x))[0])
        raise NonFiniteError(f"{what} has non-finite entry {x[bad]} at index {bad}")
    return x


def concat(*parts: Vec) -> Vec:
    if not parts:
        return np.zeros(0)
    return np.concatenate(parts)


@dataclass(frozen=True)
class Tolerance:
    """Mixed absolute/relative tolerance: ``|x-y| <= abs + rel*max(|x|,|y|)``."""

    abs: float = 0.0
    rel: float = 0.0

    def __post_init__(self):
        if self.abs < 0 or self.rel < 0:
            raise ValueError("tolerances must be non-negative")
        if self.abs == 0 and self.rel == 0:
            raise ValueError("at least one of abs, rel must be positive")


# Laws that only shuffle or add numbers.
EXACT = Tolerance(abs=1e-12)
# Chain-rule composites accumulate products.
CHAIN = Tolerance(abs=1e-9)


def approx_eq(x, y, tol: Tolerance) -> bool:
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if x.shape != y.shape:
        raise DimensionError(
            f"cannot compare vectors of dimension {x.shape[0]} and {y.shape[0]}",
            expected=x.shape[0], actual=y.shape[0])
    bound = tol.abs + tol.rel * np.maximum(np.abs(x), np.abs(y))
    return bool(np.all(np.abs(x - y) <= bound))


def max_abs_diff(x, y) -> float:
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if x.shape != y.shape:
        raise DimensionError(
            f"cannot compare vectors of dimension {x.shape[0]} and {y.shape[0]}",
            expected=x.shape[0], actual=y.shape[0])
    if x.size == 0:
        return 0.0
    return float(np.max(np.abs(x - y)))


def relative_error(approx, exact, floor: float = 1e-8) -> float:
    """Sup-norm error of ``approx`` relative to the larger of the two norms."""
    approx = np.asarray(approx, dtype=np.float64)
    exact = np.asarray(exact, dtype=np.float64)
    if approx.size == 0:
        return 0.0
    scale = max(np.max(np.abs(approx)), np.max(np.abs(exact)), floor)
    return float(np.max(np.abs(approx - exact)) / scale)


def finite_diff_pullback(f: Callable[[Vec], Vec], x, w, h: float = DEFAULT_STEP) -> Vec:
    """Central-difference estimate of the vector-Jacobian product ``w^T J_f(x)``."""
    if h <= 0:
        raise ValueError("step h must be positive")
    x = vec(x, what="x")
    w = vec(w, what="w")
    out = np.empty_like(x)
    for i in range(x.shape[0]):
        step = np.zeros_like(x)
        step[i] = h
        plus = _probe(f, x + step, f"x + h*e_{i}")
        minus = _probe(f, x - step, f"x - h*e_{i}")
        if plus.shape != w.shape or minus.shape != w.shape:
            raise DimensionError(
                f"f returned dimension {plus.shape[0]}, cotangent has {w.shape[0]}",
                expected=w.shape[0], actual=plus.shape[0])
        out[i] = np.dot(w, plus - minus) / (2 * h)
    return out


def _probe(f, point, name):
    y = np.asarray(f(point), dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(y)):
        raise NonFiniteError(f"f is not finite at probe point {name}")
    return y


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based (Philox) generator determined by ``seed`` alone."""
    return np.random.Generator(np.random.Philox(seed))


def split_rng(rng: np.random.Generator, n: int) -> list[np.random.Generator]:
    return rng.spawn(n)


def sample_vec(rng: np.random.Generator, dim: int, low: float = -1.0, high: float = 1.0) -> Vec:
    if not low < high:
        raise ValueError(f"need low < high, got [{low}, {high}]")
    return rng.uniform(low, high, size=dim)


def as_floats(x: Sequence[float]) -> list[float]:
    """Plain Python floats, for JSON output."""
    return [float(v) for v in np.asarray(x).reshape(-1)]


def permute_blocks(sizes: Sequence[int], order: Sequence[int]) -> Callable[[Vec], Vec]:
    """Map ``(x_0|x_1|...)`` with block lengths ``sizes`` to the blocks in ``order``."""
    starts = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    index = np.concatenate([np.arange(starts[k], starts[k + 1]) for k in order]
                           or [np.zeros(0, dtype=int)]).astype(int)
    return lambda x: np.asarray(x)[index]
