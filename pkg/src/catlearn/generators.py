"""Generator learners: images of linear maps and the neuron building blocks.

Every learner here is produced by :func:`catlearn.descent.descend`; none has
a hand-written update or request.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .descent import DescentConfig, descend
from .exceptions import DimensionError
from .learn import Learner, compose_all, identity_learn, parallel_learn, tensor_all
from .nnet import Activation
from .para import (ParamFn, compose_para, lift_function, linear_para, param_constant,
                   parallel_para, identity_para, scalar_mult_para, trivialise)


@dataclass(frozen=True)
class LinearMap:
    rows: int
    cols: int
    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.float64)
        if entries.size != self.rows * self.cols:
            raise DimensionError(
                f"{entries.size} entries given for a {self.rows}x{self.cols} matrix")
        object.__setattr__(self, "entries", entries.reshape(self.rows, self.cols))

    def para(self) -> ParamFn:
        return linear_para(self.entries, f"M{self.rows}x{self.cols}")


def linear_learner(M: LinearMap, cfg: DescentConfig) -> Learner:
    return descend(cfg, M.para())


def _copies(n: int, k: int) -> np.ndarray:
    """``k`` stacked identity blocks: ``R^n -> R^(k n)``."""
    return np.vstack([np.eye(n)] * k) if k else np.zeros((0, n))


def mu(cfg: DescentConfig, n: int = 1) -> Learner:
    """Addition ``R^n x R^n -> R^n``."""
    return linear_learner(LinearMap(n, 2 * n, np.hstack([np.eye(n), np.eye(n)])), cfg)


def eta(cfg: DescentConfig, n: int = 1) -> Learner:
    """Zero ``R^0 -> R^n``."""
    return linear_learner(LinearMap(n, 0, np.zeros((n, 0))), cfg)


def delta(cfg: DescentConfig, n: int = 1) -> Learner:
    """Copy ``R^n -> R^n x R^n``."""
    return linear_learner(LinearMap(2 * n, n, _copies(n, 2)), cfg)


def counit(cfg: DescentConfig, n: int = 1) -> Learner:
    """Discard ``R^n -> R^0``."""
    return linear_learner(LinearMap(0, n, np.zeros((0, n))), cfg)


def scalar_mult(cfg: DescentConfig) -> Learner:
    return descend(cfg, scalar_mult_para())


def bias(cfg: DescentConfig) -> Learner:
    return descend(cfg, param_constant(1))


def pointwise(act: Activation, n: int = 1) -> ParamFn:
    return lift_function(act.sigma, lambda a, w: w * act.dsigma(a), n, n, act.name)


def act_learner(act: Activation, cfg: DescentConfig, n: int = 1) -> Learner:
    return descend(cfg, pointwise(act, n))


def sum_tree(cfg: DescentConfig, wires: int) -> Learner:
    """Left-folded tree of ``mu`` adding ``wires`` scalars into one."""
    if wires < 1:
        raise ValueError("need at least one wire")
    if wires == 1:
        return identity_learn(1)
    stages = [parallel_learn(mu(cfg), identity_learn(k - 2)) if k > 2 else mu(cfg)
              for k in range(wires, 1, -1)]
    return compose_all(stages)


def build_neuron(n_inputs: int, act: Activation, cfg: DescentConfig) -> Learner:
    """``(mult^n || bias) ; mu-tree ; act``, parameters ``(w_1..w_n, b)``."""
    if n_inputs < 1:
        raise ValueError("a neuron needs at least one input")
    weights = tensor_all([scalar_mult(cfg)] * n_inputs + [bias(cfg)])
    return compose_all([weights, sum_tree(cfg, n_inputs + 1), act_learner(act, cfg)])


def tie_weights(F: ParamFn, copies: int) -> ParamFn:
    """Constrain the ``copies`` equal-sized parameter blocks of ``F`` to be equal.

    The result is ``(const_n ; copy) || id ; trivialise(F)`` with parameter
    dimension ``n = F.param_dim / copies``; its parameter gradient is the sum
    of the gradients of the individual blocks.
    """
    if copies < 1 or F.param_dim % copies:
        raise DimensionError(
            f"cannot split {F.param_dim} parameters into {copies} equal blocks")
    n = F.param_dim // copies
    shared = compose_para(param_constant(n), linear_para(_copies(n, copies), f"copy{copies}"))
    return compose_para(parallel_para(shared, identity_para(F.in_dim)), trivialise(F))
