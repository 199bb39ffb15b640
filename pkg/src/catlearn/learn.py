"""Learners and their symmetric monoidal structure.

A learner ``A -> B`` is a parameter dimension together with an implement
function ``I(p, a)``, an update ``U(p, a, b)`` and a request ``r(p, a, b)``.
Update and request are stored as one combined function ``(U, r)`` so that
composites can share work between them; :meth:`Learner.update` and
:meth:`Learner.request` expose the separated form.  A learner may also carry
an update-only function, used when the request is not needed (a training
loop never consumes the request of the outermost learner).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import DimensionError
from .numeric import (EXACT, Tolerance, Vec, approx_eq, concat, make_rng, max_abs_diff,
                      sample_vec, vec)

Implement = Callable[[Vec, Vec], Vec]
UpdateRequest = Callable[[Vec, Vec, Vec], "tuple[Vec, Vec]"]


@dataclass(frozen=True)
class Learner:
    param_dim: int
    in_dim: int
    out_dim: int
    implement_fn: Implement
    update_request_fn: UpdateRequest
    label: str = ""
    update_fn: Callable[[Vec, Vec, Vec], Vec] | None = None

    @classmethod
    def from_functions(cls, param_dim, in_dim, out_dim, implement, update, request,
                       label=""):
        """Build a learner from separate update and request functions."""
        return cls(param_dim, in_dim, out_dim, implement,
                   lambda p, a, b: (update(p, a, b), request(p, a, b)), label,
                   update)

    def implement(self, p, a) -> Vec:
        p = vec(p, self.param_dim, f"{self.label} parameter")
        a = vec(a, self.in_dim, f"{self.label} input")
        return vec(self.implement_fn(p, a), self.out_dim, f"{self.label} output")

    def update_request(self, p, a, b) -> tuple[Vec, Vec]:
        p = vec(p, self.param_dim, f"{self.label} parameter")
        a = vec(a, self.in_dim, f"{self.label} input")
        b = vec(b, self.out_dim, f"{self.label} target")
        new_p, new_a = self.update_request_fn(p, a, b)
        return (vec(new_p, self.param_dim, f"{self.label} updated parameter"),
                vec(new_a, self.in_dim, f"{self.label} request"))

    def update(self, p, a, b) -> Vec:
        if self.update_fn is None:
            return self.update_request(p, a, b)[0]
        p = vec(p, self.param_dim, f"{self.label} parameter")
        a = vec(a, self.in_dim, f"{self.label} input")
        b = vec(b, self.out_dim, f"{self.label} target")
        return vec(self.update_fn(p, a, b), self.param_dim,
                   f"{self.label} updated parameter")

    def request(self, p, a, b) -> Vec:
        return self.update_request(p, a, b)[1]

    def __rshift__(self, other: "Learner") -> "Learner":
        return compose_learn(self, other)

    def __matmul__(self, other: "Learner") -> "Learner":
        return parallel_learn(self, other)

    def __repr__(self):
        return (f"Learner({self.label or '?'}: R^{self.in_dim} -> R^{self.out_dim}, "
                f"{self.param_dim} params)")


def compose_learn(L1: Learner, L2: Learner) -> Learner:
    if L1.out_dim != L2.in_dim:
        raise DimensionError(
            f"cannot compose {L1.label or 'L1'} (out_dim {L1.out_dim}) with "
            f"{L2.label or 'L2'} (in_dim {L2.in_dim})",
            expected=L1.out_dim, actual=L2.in_dim)
    k = L1.param_dim

    def implement(pq, a):
        return L2.implement(pq[k:], L1.implement(pq[:k], a))

    def update_request(pq, a, c):
        p, q = pq[:k], pq[k:]
        b = L1.implement(p, a)
        new_q, wanted_b = L2.update_request(q, b, c)
        new_p, wanted_a = L1.update_request(p, a, wanted_b)
        return concat(new_p, new_q), wanted_a

    def update(pq, a, c):
        p, q = pq[:k], pq[k:]
        b = L1.implement(p, a)
        new_q, wanted_b = L2.update_request(q, b, c)
        return concat(L1.update(p, a, wanted_b), new_q)

    return Learner(L1.param_dim + L2.param_dim, L1.in_dim, L2.out_dim,
                   implement, update_request, f"({L1.label} ; {L2.label})", update)


def parallel_learn(L1: Learner, L2: Learner) -> Learner:
    kp, ka, kb = L1.param_dim, L1.in_dim, L1.out_dim

    def implement(pq, ac):
        return concat(L1.implement(pq[:kp], ac[:ka]), L2.implement(pq[kp:], ac[ka:]))

    def update_request(pq, ac, bd):
        p1, a1 = L1.update_request(pq[:kp], ac[:ka], bd[:kb])
        p2, a2 = L2.update_request(pq[kp:], ac[ka:], bd[kb:])
        return concat(p1, p2), concat(a1, a2)

    def update(pq, ac, bd):
        return concat(L1.update(pq[:kp], ac[:ka], bd[:kb]),
                      L2.update(pq[kp:], ac[ka:], bd[kb:]))

    return Learner(L1.param_dim + L2.param_dim, L1.in_dim + L2.in_dim,
                   L1.out_dim + L2.out_dim, implement, update_request,
                   f"({L1.label} || {L2.label})", update)


def identity_learn(n: int) -> Learner:
    empty = np.zeros(0)
    return Learner(0, n, n, lambda p, a: a.copy(),
                   lambda p, a, b: (empty, b.copy()), f"id{n}")


def braid_learn(n: int, m: int) -> Learner:
    """Swap ``R^n x R^m -> R^m x R^n``; the request swaps the target back."""
    empty = np.zeros(0)
    return Learner(0, n + m, n + m,
                   lambda p, a: concat(a[n:], a[:n]),
                   lambda p, a, b: (empty, concat(b[m:], b[:m])),
                   f"braid{n},{m}")


def tensor_all(learners) -> Learner:
    learners = list(learners)
    out = learners[0]
    for L in learners[1:]:
        out = parallel_learn(out, L)
    return out


def compose_all(learners) -> Learner:
    learners = list(learners)
    out = learners[0]
    for L in learners[1:]:
        out = compose_learn(out, L)
    return out


@dataclass
class Deviation:
    """Largest observed disagreement between two learners, per function."""

    implement: float = 0.0
    update: float = 0.0
    request: float = 0.0
    points: int = 0
    skipped: int = 0

    @property
    def worst(self) -> float:
        return max(self.implement, self.update, self.request)

    def merge(self, other: "Deviation") -> "Deviation":
        return Deviation(max(self.implement, other.implement),
                         max(self.update, other.update),
                         max(self.request, other.request),
                         self.points + other.points,
                         self.skipped + other.skipped)

    def as_dict(self) -> dict:
        return {"implement": self.implement, "update": self.update,
                "request": self.request}


def uniform_sampler(low: float = -1.0, high: float = 1.0,
                    target_low: float | None = None, target_high: float | None = None):
    """Sampler of ``(p, a, b)`` for a learner; parameters always in ``[-1, 1]``."""
    tl = low if target_low is None else target_low
    th = high if target_high is None else target_high

    def sample(rng, L: Learner):
        return (sample_vec(rng, L.param_dim, -1.0, 1.0),
                sample_vec(rng, L.in_dim, low, high),
                sample_vec(rng, L.out_dim, tl, th))

    return sample


def _identity(p):
    return p


def learner_deviation(L1: Learner, L2: Learner, trials: int, rng,
                      param_map: Callable[[Vec], Vec] | None = None,
                      sampler=None, retries: int = 10,
                      retry_on: tuple = ()) -> Deviation:
    """Compare ``L1`` and ``L2`` at ``trials`` random points.

    ``param_map`` is a bijection ``f: P1 -> P2``; the checks are
    ``I2(f(p), a) = I1(p, a)``, ``U2(f(p), a, b) = f(U1(p, a, b))`` and
    ``r2(f(p), a, b) = r1(p, a, b)``.  Points raising one of ``retry_on``
    are resampled up to ``retries`` times.
    """
    if (L1.param_dim, L1.in_dim, L1.out_dim) != (L2.param_dim, L2.in_dim, L2.out_dim):
        raise DimensionError(
            f"learner types differ: {(L1.param_dim, L1.in_dim, L1.out_dim)} vs "
            f"{(L2.param_dim, L2.in_dim, L2.out_dim)}")
    f = param_map or _identity
    sampler = sampler or uniform_sampler()
    dev = Deviation()
    for _ in range(trials):
        for attempt in range(retries + 1):
            p, a, b = sampler(rng, L1)
            try:
                i1 = L1.implement(p, a)
                u1, r1 = L1.update_request(p, a, b)
                i2 = L2.implement(f(p), a)
                u2, r2 = L2.update_request(f(p), a, b)
            except retry_on:
                dev.skipped += 1
                if attempt == retries:
                    raise
                continue
            break
        dev = dev.merge(Deviation(max_abs_diff(i1, i2), max_abs_diff(f(u1), u2),
                                  max_abs_diff(r1, r2), 1))
    return dev


def equivalent_extensionally(L1: Learner, L2: Learner, trials: int = 100,
                             tol: Tolerance = EXACT, rng=None, param_map=None,
                             sampler=None) -> bool:
    """True iff the learners agree on all three functions at sampled points.

    Only the supplied parameter bijection (identity by default) is tried;
    no search over reparametrisations is attempted.
    """
    if (L1.param_dim, L1.in_dim, L1.out_dim) != (L2.param_dim, L2.in_dim, L2.out_dim):
        return False
    if rng is None:
        rng = make_rng(0)
    f = param_map or _identity
    sampler = sampler or uniform_sampler()
    for _ in range(trials):
        p, a, b = sampler(rng, L1)
        u1, r1 = L1.update_request(p, a, b)
        u2, r2 = L2.update_request(f(p), a, b)
        if not (approx_eq(L1.implement(p, a), L2.implement(f(p), a), tol)
                and approx_eq(f(u1), u2, tol) and approx_eq(r1, r2, tol)):
            return False
    return True


def block_swap(n: int) -> Callable[[Vec], Vec]:
    """Parameter bijection ``(p|q) -> (q|p)`` with ``len(p) == n``."""
    return lambda pq: concat(pq[n:], pq[:n])
