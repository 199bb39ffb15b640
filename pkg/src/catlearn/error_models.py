"""Error functions that parametrise the gradient-descent functor.

An :class:`ErrorModel` bundles ``e(x, y)``, its derivative in ``x``, the
closed-form inverse of that derivative in ``y`` and the weighting ``alpha``
applied to the summed error of an ``m``-dimensional output.  All callables
act elementwise on numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import DomainError
from .numeric import vec

Elementwise = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _always_valid(x):
    return np.ones(np.shape(x), dtype=bool)


@dataclass(frozen=True)
class ErrorModel:
    name: str
    e: Elementwise
    de_dx: Elementwise
    inv_de_dx: Elementwise
    alpha: Callable[[int], float]
    valid_point: Callable[[np.ndarray], np.ndarray] = _always_valid

    def check(self, x, what: str = "point"):
        """Raise :class:`DomainError` naming the first coordinate of ``x``
        outside the model's domain."""
        ok = np.asarray(self.valid_point(np.asarray(x)))
        if not np.all(ok):
            i = int(np.flatnonzero(~ok.reshape(-1))[0])
            value = float(np.asarray(x).reshape(-1)[i])
            raise DomainError(
                f"{self.name}: {what} coordinate {i} = {value!r} outside the domain",
                index=i, value=value)


def quadratic() -> ErrorModel:
    return ErrorModel(
        name="quadratic",
        e=lambda x, y: 0.5 * (np.asarray(x) - y) ** 2,
        de_dx=lambda x, y: np.asarray(x) - y,
        # y -> x0 - y is an involution
        inv_de_dx=lambda x0, v: np.asarray(x0) - v,
        alpha=lambda m: 1.0,
    )


def _open_unit(x):
    x = np.asarray(x)
    return (x > 0) & (x < 1)


def cross_entropy() -> ErrorModel:
    """``e(x, y) = y ln x + (1 - y) ln(1 - x)`` on ``0 < x < 1``, averaged over outputs."""
    model = None

    def guard(z):
        model.check(z, "x")
        return np.asarray(z, dtype=np.float64)

    def e(x, y):
        x = guard(x)
        return y * np.log(x) + (1 - y) * np.log1p(-x)

    def de_dx(z, y):
        z = guard(z)
        return (y - z) / (z * (1 - z))

    def inv_de_dx(z, v):
        z = guard(z)
        return z + z * (1 - z) * v

    model = ErrorModel(
        name="cross_entropy", e=e, de_dx=de_dx, inv_de_dx=inv_de_dx,
        alpha=lambda m: 1.0 / m if m > 0 else 1.0,
        valid_point=_open_unit,
    )
    return model


def xy_error() -> ErrorModel:
    return ErrorModel(
        name="xy",
        e=lambda x, y: np.asarray(x) * y,
        de_dx=lambda x, y: np.broadcast_to(np.asarray(y, dtype=np.float64), np.shape(x)).copy(),
        inv_de_dx=lambda x0, v: np.broadcast_to(np.asarray(v, dtype=np.float64), np.shape(x0)).copy(),
        alpha=lambda m: 1.0,
    )


MODELS: dict[str, Callable[[], ErrorModel]] = {
    "quadratic": quadratic,
    "cross_entropy": cross_entropy,
    "xy": xy_error,
}


def get_model(name: str) -> ErrorModel:
    try:
        return MODELS[name]()
    except KeyError:
        raise ValueError(
            f"unknown error model {name!r}; choose from {', '.join(sorted(MODELS))}") from None


def total_error(model: ErrorModel, F, p, a, b) -> float:
    """``alpha(m) * sum_j e(F(p, a)_j, b_j)``."""
    out = F.forward(p, a)
    b = vec(b, F.out_dim, "target")
    model.check(out, "output")
    return float(model.alpha(F.out_dim) * np.sum(model.e(out, b)))
