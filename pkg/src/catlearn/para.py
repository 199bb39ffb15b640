"""Parametrised differentiable functions ``P x R^n -> R^m`` with exact pullbacks.

Parameters of a composite are laid out flat, left factor first, so that the
associator and unitors are identities and categorical laws can be checked by
plain numeric comparison.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import DimensionError
from .numeric import (Vec, concat, finite_diff_pullback, max_abs_diff, relative_error,
                      sample_vec, vec)

Forward = Callable[[Vec, Vec], Vec]
Pullback = Callable[[Vec, Vec, Vec], "tuple[Vec, Vec]"]
# vjp(p, a) -> (output, back) where back(w) -> (gp, ga)
VJP = Callable[[Vec, Vec], "tuple[Vec, Callable[[Vec], tuple[Vec, Vec]]]"]


@dataclass(frozen=True)
class ParamFn:
    """A morphism of Para.

    ``forward(p, a)`` evaluates the function and ``pullback(p, a, w)`` returns
    ``(w^T dI/dp, w^T dI/da)``.  An optional ``vjp`` returning the output
    together with a backward closure lets composites avoid re-running forward
    passes; without one it is derived from ``forward`` and ``pullback``.
    """

    param_dim: int
    in_dim: int
    out_dim: int
    forward_fn: Forward
    pullback_fn: Pullback
    label: str = ""
    vjp_fn: VJP | None = None

    def forward(self, p, a) -> Vec:
        p = vec(p, self.param_dim, f"{self.label} parameter")
        a = vec(a, self.in_dim, f"{self.label} input")
        return vec(self.forward_fn(p, a), self.out_dim, f"{self.label} output")

    def pullback(self, p, a, w) -> tuple[Vec, Vec]:
        _, back = self.vjp(p, a)
        return back(w)

    def vjp(self, p, a):
        p = vec(p, self.param_dim, f"{self.label} parameter")
        a = vec(a, self.in_dim, f"{self.label} input")
        if self.vjp_fn is not None:
            out, raw_back = self.vjp_fn(p, a)
        else:
            out = self.forward_fn(p, a)

            def raw_back(w):
                return self.pullback_fn(p, a, w)

        out = vec(out, self.out_dim, f"{self.label} output")

        def back(w):
            w = vec(w, self.out_dim, f"{self.label} cotangent")
            gp, ga = raw_back(w)
            return (vec(gp, self.param_dim, f"{self.label} parameter gradient"),
                    vec(ga, self.in_dim, f"{self.label} input gradient"))

        return out, back

    def __call__(self, p, a) -> Vec:
        return self.forward(p, a)

    def __rshift__(self, other: "ParamFn") -> "ParamFn":
        return compose_para(self, other)

    def __matmul__(self, other: "ParamFn") -> "ParamFn":
        return parallel_para(self, other)

    def __repr__(self):
        return (f"ParamFn({self.label or '?'}: R^{self.param_dim} x "
                f"R^{self.in_dim} -> R^{self.out_dim})")


def compose_para(F: ParamFn, G: ParamFn) -> ParamFn:
    """Series composite ``(p|q, a) -> G(q, F(p, a))``."""
    if F.out_dim != G.in_dim:
        raise DimensionError(
            f"cannot compose {F.label or 'F'} (out_dim {F.out_dim}) with "
            f"{G.label or 'G'} (in_dim {G.in_dim})",
            expected=F.out_dim, actual=G.in_dim)
    k = F.param_dim

    def vjp(pq, a):
        p, q = pq[:k], pq[k:]
        b, back_f = F.vjp(p, a)
        c, back_g = G.vjp(q, b)

        def back(w):
            gq, wb = back_g(w)
            gp, ga = back_f(wb)
            return concat(gp, gq), ga

        return c, back

    def forward(pq, a):
        return G.forward(pq[k:], F.forward(pq[:k], a))

    def pullback(pq, a, w):
        return vjp(pq, a)[1](w)

    return ParamFn(F.param_dim + G.param_dim, F.in_dim, G.out_dim,
                   forward, pullback, f"({F.label} ; {G.label})", vjp)


def parallel_para(F: ParamFn, G: ParamFn) -> ParamFn:
    """Monoidal product, blockwise ``[F | G]`` in every slot."""
    kp, ka, kb = F.param_dim, F.in_dim, F.out_dim

    def vjp(pq, ac):
        b, back_f = F.vjp(pq[:kp], ac[:ka])
        d, back_g = G.vjp(pq[kp:], ac[ka:])

        def back(w):
            gp, ga = back_f(w[:kb])
            gq, gc = back_g(w[kb:])
            return concat(gp, gq), concat(ga, gc)

        return concat(b, d), back

    def forward(pq, ac):
        return concat(F.forward(pq[:kp], ac[:ka]), G.forward(pq[kp:], ac[ka:]))

    def pullback(pq, ac, w):
        return vjp(pq, ac)[1](w)

    return ParamFn(F.param_dim + G.param_dim, F.in_dim + G.in_dim,
                   F.out_dim + G.out_dim, forward, pullback,
                   f"({F.label} || {G.label})", vjp)


def identity_para(n: int) -> ParamFn:
    empty = np.zeros(0)
    return ParamFn(0, n, n,
                   lambda p, a: a.copy(),
                   lambda p, a, w: (empty, w.copy()),
                   f"id{n}")


def lift_function(f: Callable[[Vec], Vec], pullback: Callable[[Vec, Vec], Vec],
                  in_dim: int, out_dim: int, label: str = "f") -> ParamFn:
    """Regard ``f: R^n -> R^m`` with pullback ``(a, w) -> w^T Df(a)`` as
    trivially parametrised by ``R^0``."""
    empty = np.zeros(0)
    return ParamFn(0, in_dim, out_dim,
                   lambda p, a: f(a),
                   lambda p, a, w: (empty, pullback(a, w)),
                   label)


def linear_para(matrix, label: str | None = None) -> ParamFn:
    """The linear map ``a -> M a`` as a trivially parametrised function."""
    M = np.asarray(matrix, dtype=np.float64)
    if M.ndim != 2:
        raise DimensionError(f"linear map needs a 2-D matrix, got shape {M.shape}")
    rows, cols = M.shape
    return lift_function(lambda a: M @ a, lambda a, w: M.T @ w, cols, rows,
                         label or f"linear{rows}x{cols}")


def swap_para(n: int, m: int) -> ParamFn:
    """Braiding ``R^n x R^m -> R^m x R^n``, ``(a, b) -> (b, a)``."""
    return lift_function(lambda a: concat(a[n:], a[:n]),
                         lambda a, w: concat(w[m:], w[:m]),
                         n + m, n + m, f"swap{n},{m}")


def param_constant(n: int) -> ParamFn:
    """The parametrised constant ``P x R^0 -> P``, ``(p, ()) -> p``."""
    empty = np.zeros(0)
    return ParamFn(n, 0, n,
                   lambda p, a: p.copy(),
                   lambda p, a, w: (w.copy(), empty),
                   f"const{n}")


def scalar_mult_para() -> ParamFn:
    """``(w, x) -> w x`` on the real line."""
    return ParamFn(1, 1, 1,
                   lambda p, a: p * a,
                   lambda p, a, w: (w * a, w * p),
                   "mult")


def trivialise(F: ParamFn) -> ParamFn:
    """Move the parameters of ``F`` into its input: ``((), (p|a)) -> F(p, a)``."""
    k = F.param_dim

    def vjp(_, pa):
        out, back_f = F.vjp(pa[:k], pa[k:])

        def back(w):
            gp, ga = back_f(w)
            return np.zeros(0), concat(gp, ga)

        return out, back

    return ParamFn(0, k + F.in_dim, F.out_dim,
                   lambda _, pa: F.forward(pa[:k], pa[k:]),
                   lambda _, pa, w: vjp(_, pa)[1](w),
                   f"triv({F.label})", vjp)


def factor_through_constant(F: ParamFn) -> ParamFn:
    """Rebuild ``F`` as ``(const_P || id_A) ; trivialise(F)``."""
    return compose_para(parallel_para(param_constant(F.param_dim), identity_para(F.in_dim)),
                        trivialise(F))


def joint_function(F: ParamFn) -> Callable[[Vec], Vec]:
    """``F`` as a single function of the concatenated vector ``(p|a)``."""
    k = F.param_dim
    return lambda z: F.forward(z[:k], z[k:])


def pullback_error(F: ParamFn, rng, points: int = 5, low: float = -1.0,
                   high: float = 1.0, h: float = 1e-6) -> float:
    """Worst relative error between ``F.pullback`` and central differences
    over ``points`` random ``(p, a, w)``."""
    f = joint_function(F)
    worst = 0.0
    for _ in range(points):
        p = sample_vec(rng, F.param_dim, low, high)
        a = sample_vec(rng, F.in_dim, low, high)
        w = sample_vec(rng, F.out_dim, -1.0, 1.0)
        gp, ga = F.pullback(p, a, w)
        numeric = finite_diff_pullback(f, concat(p, a), w, h)
        worst = max(worst, relative_error(concat(gp, ga), numeric))
    return worst


def para_deviation(F1: ParamFn, F2: ParamFn, points: int, rng,
                   param_map: Callable[[Vec], Vec] | None = None,
                   low: float = -1.0, high: float = 1.0) -> float:
    """Largest disagreement of forward values and pullbacks at random points.

    ``param_map`` sends parameters of ``F1`` to those of ``F2``; it must be a
    coordinate permutation so that parameter gradients can be compared
    through it.
    """
    if (F1.param_dim, F1.in_dim, F1.out_dim) != (F2.param_dim, F2.in_dim, F2.out_dim):
        raise DimensionError(
            f"types differ: {(F1.param_dim, F1.in_dim, F1.out_dim)} vs "
            f"{(F2.param_dim, F2.in_dim, F2.out_dim)}")
    f = param_map or (lambda p: p)
    worst = 0.0
    for _ in range(points):
        p = sample_vec(rng, F1.param_dim, low, high)
        a = sample_vec(rng, F1.in_dim, low, high)
        w = sample_vec(rng, F1.out_dim, -1.0, 1.0)
        out1, back1 = F1.vjp(p, a)
        out2, back2 = F2.vjp(f(p), a)
        gp1, ga1 = back1(w)
        gp2, ga2 = back2(w)
        worst = max(worst, max_abs_diff(out1, out2), max_abs_diff(f(gp1), gp2),
                    max_abs_diff(ga1, ga2))
    return worst
