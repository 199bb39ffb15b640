"""The gradient-descent/backpropagation functor from parametrised functions to learners.

For an error model with weighting ``alpha`` and step size ``eps``, a
parametrised function ``I: P x R^n -> R^m`` becomes the learner with

    total error   E(p, a, b) = alpha(m) * sum_j e(I_j(p, a), b_j)
    update        U(p, a, b) = p - eps * grad_p E
    request       r(p, a, b)_i = inv_de_dx(a_i, (grad_a E)_i / alpha(n))

Both gradients come out of a single pullback of the cotangent
``alpha(m) * de_dx(I(p, a), b)``.

The request is normalised by ``alpha`` of the *input* dimension.  This is
what makes the construction compose for non-constant ``alpha``: a composite
``F ; G`` with hidden width ``k`` then satisfies
``U_F(p, a, r_G(...)) = U_{F;G}`` because the ``alpha(k)`` introduced by F's
total error cancels the ``1/alpha(k)`` in G's request.  Normalising by the
output dimension instead (``request_norm="codomain"``) is kept for
comparison; it agrees whenever ``alpha`` is constant.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .error_models import ErrorModel, quadratic, total_error
from .exceptions import DomainError
from .learn import Deviation, Learner, compose_learn, learner_deviation, parallel_learn, uniform_sampler
from .para import ParamFn, compose_para, parallel_para
from .numeric import CHAIN, EXACT, Tolerance, vec

RequestNorm = Literal["domain", "codomain"]


@dataclass(frozen=True)
class DescentConfig:
    eps: float
    model: ErrorModel = field(default_factory=quadratic)
    request_norm: RequestNorm = "domain"

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError(f"step size must be positive, got {self.eps}")
        if self.request_norm not in ("domain", "codomain"):
            raise ValueError(f"unknown request normalisation {self.request_norm!r}")


def descend(cfg: DescentConfig, F: ParamFn) -> Learner:
    model, eps = cfg.model, cfg.eps
    weight = model.alpha(F.out_dim)
    norm = model.alpha(F.in_dim if cfg.request_norm == "domain" else F.out_dim)

    def gradients(p, a, b):
        out, back = F.vjp(p, a)
        model.check(out, "output")
        return back(weight * model.de_dx(out, b))

    def update(p, a, b):
        gp, _ = gradients(p, a, b)
        return p - eps * gp

    def update_request(p, a, b):
        gp, ga = gradients(p, a, b)
        model.check(a, "input")
        return p - eps * gp, model.inv_de_dx(a, ga / norm)

    return Learner(F.param_dim, F.in_dim, F.out_dim, F.forward, update_request,
                   f"L[{F.label}]", update)


@dataclass
class FunctorialityReport:
    deviation: Deviation
    tol: float
    domain_failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.deviation.points > 0 and self.deviation.worst <= self.tol

    def as_dict(self) -> dict:
        return {"max_abs_deviation": self.deviation.as_dict(),
                "tolerance": self.tol, "passed": self.passed,
                "points": self.deviation.points,
                "resampled": self.deviation.skipped,
                "domain_failures": self.domain_failures}


def sampler_for(model: ErrorModel):
    """Random ``(p, a, b)`` inside the model's domain."""
    if model.name == "cross_entropy":
        return uniform_sampler(0.02, 0.98)
    return uniform_sampler(-1.0, 1.0)


def _compare(L1, L2, trials, tol, rng, sampler, param_map=None):
    report = FunctorialityReport(Deviation(), tol.abs)
    for t in range(trials):
        try:
            dev = learner_deviation(L1, L2, 1, rng, param_map=param_map, sampler=sampler,
                                    retries=10, retry_on=(DomainError,))
        except DomainError as exc:
            report.domain_failures.append(f"trial {t}: {exc}")
            continue
        report.deviation = report.deviation.merge(dev)
    return report


def verify_functoriality(cfg: DescentConfig, F: ParamFn, G: ParamFn, trials: int = 100,
                         tol: Tolerance = CHAIN, rng=None, sampler=None) -> FunctorialityReport:
    """Compare ``descend(F ; G)`` with ``descend(F) ; descend(G)``."""
    whole = descend(cfg, compose_para(F, G))
    parts = compose_learn(descend(cfg, F), descend(cfg, G))
    return _compare(whole, parts, trials, tol, rng, sampler or sampler_for(cfg.model))


def verify_monoidal(cfg: DescentConfig, F: ParamFn, G: ParamFn, trials: int = 100,
                    tol: Tolerance = EXACT, rng=None, sampler=None) -> FunctorialityReport:
    """Compare ``descend(F || G)`` with ``descend(F) || descend(G)``."""
    whole = descend(cfg, parallel_para(F, G))
    parts = parallel_learn(descend(cfg, F), descend(cfg, G))
    return _compare(whole, parts, trials, tol, rng, sampler or sampler_for(cfg.model))


@dataclass
class Trajectory:
    points: list[np.ndarray]
    errors: list[float]
    truncated: bool = False
    reason: str | None = None


def request_iterate(cfg: DescentConfig, F: ParamFn, p, a, b, steps: int) -> Trajectory:
    """Repeatedly replace the input by its request at fixed ``p`` and target ``b``.

    Stops early, marking the trajectory truncated, at the first point where the
    request or total error cannot be evaluated; only evaluable points are kept.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    L = descend(cfg, F)
    p = vec(p, F.param_dim, "parameter")
    a = vec(a, F.in_dim, "input")
    b = vec(b, F.out_dim, "target")
    # an invalid starting point is the caller's error, not a truncation
    traj = Trajectory([a], [total_error(cfg.model, F, p, a, b)])
    try:
        for _ in range(steps):
            a = L.request(p, a, b)
            err = total_error(cfg.model, F, p, a, b)
            traj.points.append(a)
            traj.errors.append(err)
    except (DomainError, ArithmeticError) as exc:
        traj.truncated = True
        traj.reason = str(exc)
    return traj
