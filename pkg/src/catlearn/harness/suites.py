"""Named verification suites run by ``catlearn verify``.

Each suite draws all of its randomness from one seeded generator and writes
its findings into a :class:`Report`.  A *check* is asserted against a
tolerance; a *discrepancy* records a measured difference between an
implemented quantity and a reference closed form that is known not to hold
exactly, and never fails the report.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..descent import DescentConfig, descend, sampler_for, verify_functoriality, verify_monoidal
from ..error_models import cross_entropy, quadratic, total_error, xy_error
from ..exceptions import DomainError
from ..learn import (Learner, braid_learn, compose_all, compose_learn, identity_learn,
                     learner_deviation, parallel_learn, uniform_sampler)
from ..nnet import (ACTIVATIONS, Layer, Network, concat_networks, implement_network,
                    layer_param_fn)
from ..numeric import (CHAIN, EXACT, concat, finite_diff_pullback, make_rng, max_abs_diff,
                       permute_blocks, relative_error)
from ..para import (ParamFn, compose_para, factor_through_constant, identity_para,
                    linear_para, para_deviation, param_constant, parallel_para,
                    pullback_error, scalar_mult_para, swap_para, trivialise)
from .. import generators as gen
from .io import Report

GRADIENT_RTOL = 1e-5

SIGMOID = ACTIVATIONS["sigmoid"]
IDENTITY = ACTIVATIONS["identity"]


@dataclass
class Context:
    report: Report
    rng: np.random.Generator
    trials: int
    tol_override: float | None = None

    def check(self, name: str, deviation: float, tol: float, metric: str = "abs"):
        self.report.check(name, deviation,
                          tol if self.tol_override is None else self.tol_override, metric)

    def width(self, high: int = 4) -> int:
        return int(self.rng.integers(1, high + 1))


# random building blocks

def random_layer(rng, n_in: int, n_out: int, dense: bool = False) -> Layer:
    if dense:
        return Layer.full(n_in, n_out)
    pairs = [(j, i) for j in range(1, n_out + 1) for i in range(1, n_in + 1)]
    keep = rng.random(len(pairs)) < 0.6
    return Layer(n_in, n_out, [c for c, k in zip(pairs, keep) if k])


def random_para(rng, n_in: int, n_out: int) -> ParamFn:
    """A random morphism ``R^n_in -> R^n_out`` of varied kind."""
    kind = int(rng.integers(0, 3))
    if kind == 0:
        return linear_para(rng.uniform(-1, 1, size=(n_out, n_in)))
    act = list(ACTIVATIONS.values())[int(rng.integers(0, len(ACTIVATIONS)))]
    return layer_param_fn(random_layer(rng, n_in, n_out, dense=kind == 2), act)


def random_generic_learner(rng, n_in: int, n_out: int) -> Learner:
    """A learner with arbitrary smooth update and request, not from descent."""
    k = int(rng.integers(0, 3))
    A = rng.uniform(-1, 1, size=(n_out, n_in + k))
    Up = rng.uniform(-1, 1, size=(k, k + n_in + n_out))
    Ra = rng.uniform(-1, 1, size=(n_in, k + n_in + n_out))

    def implement(p, a):
        return np.tanh(A @ concat(p, a))

    def update(p, a, b):
        return p + np.sin(Up @ concat(p, a, b))

    def request(p, a, b):
        return np.cos(Ra @ concat(p, a, b))

    return Learner.from_functions(k, n_in, n_out, implement, update, request, "generic")


def random_learner(rng, n_in: int, n_out: int) -> Learner:
    if rng.random() < 0.5:
        return random_generic_learner(rng, n_in, n_out)
    cfg = DescentConfig(float(rng.uniform(0.01, 1.0)))
    return descend(cfg, random_para(rng, n_in, n_out))


def sigmoid_layer(n_in: int, n_out: int) -> ParamFn:
    return layer_param_fn(Layer.full(n_in, n_out), SIGMOID)


# category axioms

@dataclass(frozen=True)
class _Ops:
    """The symmetric monoidal structure of either category, uniformly."""

    prefix: str
    make: Callable
    compose: Callable
    parallel: Callable
    identity: Callable
    swap: Callable
    deviation: Callable


def _para_deviation(X, Y, ctx, param_map=None):
    return para_deviation(X, Y, 1, ctx.rng, param_map=param_map)


def _learn_deviation(X, Y, ctx, param_map=None):
    return learner_deviation(X, Y, 1, ctx.rng, param_map=param_map).worst


PARA_OPS = _Ops("para", random_para, compose_para, parallel_para, identity_para,
                swap_para, _para_deviation)
LEARN_OPS = _Ops("learn", random_learner, compose_learn, parallel_learn, identity_learn,
                 braid_learn, _learn_deviation)


def _axioms(ctx: Context, ops: _Ops):
    worst: dict[str, float] = {}

    def record(name, value):
        worst[name] = max(worst.get(name, 0.0), value)

    rng = ctx.rng
    for _ in range(ctx.trials):
        n0, n1, n2, n3, n4 = (ctx.width() for _ in range(5))
        F = ops.make(rng, n0, n1)
        G = ops.make(rng, n1, n2)
        H = ops.make(rng, n2, n3)
        dev = ops.deviation
        record("left_unit", dev(ops.compose(ops.identity(n0), F), F, ctx))
        record("right_unit", dev(ops.compose(F, ops.identity(n1)), F, ctx))
        record("associativity", dev(ops.compose(ops.compose(F, G), H),
                                    ops.compose(F, ops.compose(G, H)), ctx))
        record("tensor_unit", max(dev(ops.parallel(F, ops.identity(0)), F, ctx),
                                  dev(ops.parallel(ops.identity(0), F), F, ctx)))
        record("tensor_associativity", dev(ops.parallel(ops.parallel(F, G), H),
                                           ops.parallel(F, ops.parallel(G, H)), ctx))
        # interchange: (F;G) || (K;M) = (F || K) ; (G || M)
        K = ops.make(rng, n3, n4)
        M = ops.make(rng, n4, n2)
        sizes = [F.param_dim, G.param_dim, K.param_dim, M.param_dim]
        record("interchange", dev(ops.parallel(ops.compose(F, G), ops.compose(K, M)),
                                  ops.compose(ops.parallel(F, K), ops.parallel(G, M)), ctx,
                                  permute_blocks(sizes, [0, 2, 1, 3])))
        record("identity_tensor", dev(ops.parallel(ops.identity(n0), ops.identity(n1)),
                                      ops.identity(n0 + n1), ctx))
        record("braiding_involution", dev(ops.compose(ops.swap(n0, n1), ops.swap(n1, n0)),
                                          ops.identity(n0 + n1), ctx))
        # naturality: (F || G) ; swap = swap ; (G || F)
        G2 = ops.make(rng, n2, n3)
        record("braiding_naturality",
               dev(ops.compose(ops.parallel(F, G2), ops.swap(n1, n3)),
                   ops.compose(ops.swap(n0, n2), ops.parallel(G2, F)), ctx,
                   permute_blocks([F.param_dim, G2.param_dim], [1, 0])))
        if ops is PARA_OPS:
            record("parametrised_constant_factorisation",
                   dev(factor_through_constant(F), F, ctx))
    for name, value in worst.items():
        ctx.check(f"{ops.prefix}.{name}", value, EXACT.abs)


def suite_para_axioms(ctx: Context):
    _axioms(ctx, PARA_OPS)


def suite_learn_axioms(ctx: Context):
    _axioms(ctx, LEARN_OPS)


# functoriality

def _functoriality_series(ctx: Context, cfg: DescentConfig, name: str, tol: float):
    worst, points, failures = 0.0, 0, 0
    for _ in range(ctx.trials):
        n, k, m = ctx.width(), ctx.width(), ctx.width()
        res = verify_functoriality(cfg, sigmoid_layer(n, k), sigmoid_layer(k, m), trials=1,
                                   rng=ctx.rng)
        worst = max(worst, res.deviation.worst)
        points += res.deviation.points
        failures += len(res.domain_failures)
    ctx.check(name, worst, tol)
    ctx.report.results[name] = {"points": points, "domain_failures": failures}


def _functoriality_parallel(ctx: Context, cfg: DescentConfig, make=sigmoid_layer):
    worst = 0.0
    for _ in range(ctx.trials):
        F = make(ctx.width(), ctx.width())
        G = make(ctx.width(), ctx.width())
        res = verify_monoidal(cfg, F, G, trials=1, rng=ctx.rng)
        worst = max(worst, res.deviation.worst)
    return worst


def suite_functoriality(ctx: Context):
    cfg = DescentConfig(0.01)
    _functoriality_series(ctx, cfg, "functoriality.series", CHAIN.abs)
    ctx.check("functoriality.parallel", _functoriality_parallel(ctx, cfg), EXACT.abs)
    _functoriality_series(ctx, DescentConfig(0.01, xy_error()), "functoriality.series.xy",
                          CHAIN.abs)

    worst_id = max(learner_deviation(descend(cfg, identity_para(n)), identity_learn(n), 1,
                                     ctx.rng).worst
                   for n in (ctx.width() for _ in range(ctx.trials)))
    ctx.check("functoriality.identity", worst_id, EXACT.abs)

    worst_net, worst_chain = 0.0, 0.0
    for _ in range(max(1, ctx.trials // 4)):
        N1 = _random_network(ctx)
        N2 = _random_network(ctx, N1.width_out)
        act = SIGMOID if ctx.rng.random() < 0.5 else ACTIVATIONS["tanh"]
        whole = implement_network(concat_networks(N1, N2), act)
        parts = compose_para(implement_network(N1, act), implement_network(N2, act))
        worst_net = max(worst_net, para_deviation(whole, parts, 1, ctx.rng))
        layers = [descend(cfg, layer_param_fn(layer, act)) for layer in N1.layers]
        worst_chain = max(worst_chain, learner_deviation(
            descend(cfg, implement_network(N1, act)), compose_all(layers), 1, ctx.rng).worst)
    ctx.check("functoriality.network_concatenation", worst_net, EXACT.abs)
    ctx.check("functoriality.network_to_learner", worst_chain, CHAIN.abs)

    eps_lin, eps_free, grad = 0.0, 0.0, 0.0
    for _ in range(ctx.trials):
        F = sigmoid_layer(ctx.width(), ctx.width())
        e1, e2 = (float(ctx.rng.uniform(0.01, 1.0)) for _ in range(2))
        L1, L2 = descend(DescentConfig(e1), F), descend(DescentConfig(e2), F)
        p, a, b = uniform_sampler()(ctx.rng, L1)
        u1, r1 = L1.update_request(p, a, b)
        u2, r2 = L2.update_request(p, a, b)
        eps_lin = max(eps_lin, max_abs_diff((p - u1) / e1, (p - u2) / e2))
        eps_free = max(eps_free, max_abs_diff(r1, r2))
        numeric = finite_diff_pullback(
            lambda q: np.array([total_error(cfg.model, F, q, a, b)]), p, np.ones(1))
        grad = max(grad, relative_error((p - u1) / e1, numeric))
    ctx.check("descent.update_linear_in_eps", eps_lin, EXACT.abs)
    ctx.check("descent.request_independent_of_eps", eps_free, EXACT.abs)
    ctx.check("descent.update_is_gradient_step", grad, GRADIENT_RTOL, "relative")


def _random_network(ctx: Context, width_in: int | None = None) -> Network:
    width = width_in or ctx.width()
    layers = []
    for _ in range(int(ctx.rng.integers(1, 4))):
        n_out = ctx.width()
        layers.append(random_layer(ctx.rng, width, n_out))
        width = n_out
    return Network(width_in or layers[0].n_in, layers)


# bimonoid

def suite_bimonoid(ctx: Context):
    rng = ctx.rng
    cfg = DescentConfig(0.1)
    mu, eta, delta, counit = (gen.mu(cfg), gen.eta(cfg), gen.delta(cfg), gen.counit(cfg))
    none = np.zeros(0)
    rows = {k: 0.0 for k in ("mu.implement", "mu.request", "eta.implement", "eta.request",
                             "delta.implement", "delta.request", "counit.implement",
                             "counit.request", "updates_trivial")}

    def row(name, got, want):
        rows[name] = max(rows[name], max_abs_diff(got, want))

    for _ in range(ctx.trials):
        a1, a2, a3 = rng.uniform(-1, 1, size=3)
        row("mu.implement", mu.implement(none, [a1, a2]), [a1 + a2])
        row("mu.request", mu.request(none, [a1, a2], [a3]), [a3 - a2, a3 - a1])
        row("eta.implement", eta.implement(none, none), [0.0])
        row("eta.request", eta.request(none, none, [a1]), none)
        row("delta.implement", delta.implement(none, [a1]), [a1, a1])
        row("delta.request", delta.request(none, [a1], [a2, a3]), [a2 + a3 - a1])
        row("counit.implement", counit.implement(none, [a1]), none)
        row("counit.request", counit.request(none, [a1], none), [0.0])
        for L, a, b in ((mu, [a1, a2], [a3]), (eta, none, [a1]), (delta, [a1], [a2, a3]),
                        (counit, [a1], none)):
            rows["updates_trivial"] = max(rows["updates_trivial"],
                                          float(L.update(none, a, b).size))
    for name, value in rows.items():
        ctx.check(f"table.{name}", value, EXACT.abs)
    if rows["counit.request"] > EXACT.abs:
        ctx.report.results["table.counit.request"] = {
            "note": "descent gives r(a) = a for the counit under quadratic error; "
                    "the reference value 0 contradicts counitality of delta",
            "max_abs_deviation": rows["counit.request"]}

    id1 = identity_learn(1)
    swap = braid_learn(1, 1)
    laws = {
        "mu_associativity": (compose_learn(parallel_learn(mu, id1), mu),
                             compose_learn(parallel_learn(id1, mu), mu)),
        "mu_left_unit": (compose_learn(parallel_learn(eta, id1), mu), id1),
        "mu_right_unit": (compose_learn(parallel_learn(id1, eta), mu), id1),
        "mu_commutativity": (compose_learn(swap, mu), mu),
        "delta_coassociativity": (compose_learn(delta, parallel_learn(delta, id1)),
                                  compose_learn(delta, parallel_learn(id1, delta))),
        "delta_left_counit": (compose_learn(delta, parallel_learn(counit, id1)), id1),
        "delta_right_counit": (compose_learn(delta, parallel_learn(id1, counit)), id1),
        "delta_cocommutativity": (compose_learn(delta, swap), delta),
        "compatibility": (compose_learn(mu, delta),
                          compose_all([parallel_learn(delta, delta),
                                       parallel_learn(parallel_learn(id1, swap), id1),
                                       parallel_learn(mu, mu)])),
        "mu_counit": (compose_learn(mu, counit), parallel_learn(counit, counit)),
        "eta_delta": (compose_learn(eta, delta), parallel_learn(eta, eta)),
        "eta_counit": (compose_learn(eta, counit), identity_learn(0)),
    }
    for name, (X, Y) in laws.items():
        ctx.check(f"axiom.{name}", learner_deviation(X, Y, ctx.trials, rng).worst, EXACT.abs)

    xy = DescentConfig(0.1, xy_error())
    mu_xy, delta_xy = gen.mu(xy), gen.delta(xy)
    dev_mu = dev_delta = 0.0
    for _ in range(ctx.trials):
        a1, a2, a3 = rng.uniform(-1, 1, size=3)
        dev_mu = max(dev_mu, max_abs_diff(mu_xy.request(none, [a1, a2], [a3]), [a3, a3]))
        dev_delta = max(dev_delta, max_abs_diff(delta_xy.request(none, [a1], [a2, a3]),
                                                [a2 + a3]))
    ctx.check("xy.mu_request", dev_mu, EXACT.abs)
    ctx.check("xy.delta_request", dev_delta, EXACT.abs)


# neurons and generator closed forms

def suite_neurons(ctx: Context):
    rng = ctx.rng
    eps = 0.1
    cfg = DescentConfig(eps)
    for act in (IDENTITY, SIGMOID):
        for n in range(1, 5):
            neuron = gen.build_neuron(n, act, cfg)
            layer = descend(cfg, layer_param_fn(Layer.full(n, 1), act))
            ctx.check(f"neuron.factorisation[n={n},{act.name}]",
                      learner_deviation(neuron, layer, ctx.trials, rng).worst, CHAIN.abs)

    lam, beta = gen.scalar_mult(cfg), gen.bias(cfg)
    dev = {"scalar_mult.update": 0.0, "scalar_mult.request": 0.0, "bias.update": 0.0,
           "activation.request[identity]": 0.0}
    sigma_reference = {"sigmoid": 0.0, "tanh": 0.0}
    sigma_functor = {"sigmoid": 0.0, "tanh": 0.0}
    none = np.zeros(0)
    for _ in range(ctx.trials):
        w, x, y = rng.uniform(-1, 1, size=3)
        dev["scalar_mult.update"] = max(dev["scalar_mult.update"], max_abs_diff(
            lam.update([w], [x], [y]), [w - eps * (w * x - y) * x]))
        dev["scalar_mult.request"] = max(dev["scalar_mult.request"], max_abs_diff(
            lam.request([w], [x], [y]), [x - (w * x - y) * w]))
        dev["bias.update"] = max(dev["bias.update"], max_abs_diff(
            beta.update([w], none, [y]), [w - eps * (w - y)]))
        dev["activation.request[identity]"] = max(
            dev["activation.request[identity]"],
            max_abs_diff(gen.act_learner(IDENTITY, cfg).request(none, [x], [y]),
                         [x - (x - y) * 1.0]))
        for name in sigma_reference:
            act = ACTIVATIONS[name]
            got = gen.act_learner(act, cfg).request(none, [x], [y])
            sigma_reference[name] = max(sigma_reference[name], max_abs_diff(
                got, x - (x - y) * act.dsigma(np.array([x]))))
            sigma_functor[name] = max(sigma_functor[name], max_abs_diff(
                got, x - (act.sigma(np.array([x])) - y) * act.dsigma(np.array([x]))))
    for name, value in dev.items():
        ctx.check(f"generator.{name}", value, EXACT.abs)
    for name in sigma_reference:
        ctx.check(f"generator.activation.request[{name}]", sigma_functor[name], EXACT.abs)
        ctx.report.discrepancy(
            f"generator.activation.request_reference[{name}]", sigma_reference[name],
            "the closed form x - (x - y) sigma'(x) matches only the identity activation; "
            "descent gives x - (sigma(x) - y) sigma'(x)")

    _weight_tying(ctx, cfg)


def _weight_tying(ctx: Context, cfg: DescentConfig):
    rng = ctx.rng
    two = parallel_para(scalar_mult_para(), scalar_mult_para())
    tied = gen.tie_weights(two, 2)
    grad_sum = single = update = 0.0
    for _ in range(ctx.trials):
        w = rng.uniform(-1, 1, size=1)
        a = rng.uniform(-1, 1, size=2)
        b = rng.uniform(-1, 1, size=2)
        gp_tied, ga_tied = tied.pullback(w, a, b)
        gp, ga = two.pullback(concat(w, w), a, b)
        grad_sum = max(grad_sum, max_abs_diff(gp_tied, [gp.sum()]), max_abs_diff(ga_tied, ga))
        F = random_para(rng, 2, 2)
        single = max(single, para_deviation(gen.tie_weights(F, 1), F, 1, rng))
        x, y = a
        want = w - cfg.eps * ((w * x - b[0]) * x + (w * y - b[1]) * y)
        update = max(update, max_abs_diff(descend(cfg, tied).update(w, a, b), want))
    ctx.check("tying.gradient_is_sum", grad_sum, EXACT.abs)
    ctx.check("tying.single_copy_is_identity", single, EXACT.abs)
    ctx.check("tying.learner_update", update, EXACT.abs)
    ctx.check("tying.pullback_vs_finite_difference",
              pullback_error(tied, rng, points=5), GRADIENT_RTOL, "relative")


# worked two-layer example

LAYER_B = Layer(2, 2, [(1, 1), (1, 2), (2, 1)])
LAYER_C = Layer.full(2, 1)
P_NAMES = ["p11", "p12", "p21", "p1b", "p2b"]
Q_NAMES = ["q1", "q2", "qb"]


def _section6_forms(p, q, a, c, b, eps, act):
    """Hand-derived closed forms for the two-layer network, as stated and as repaired.

    Returns ``(forms, repaired)``; each maps a coordinate label to its value.
    """
    s, ds = act.sigma, act.dsigma
    p11, p12, p21, p1b, p2b = p
    q1, q2, qb = q
    a1, a2 = a
    beta1, beta2 = p11 * a1 + p12 * a2 + p1b, p21 * a1 + p2b
    gamma = q1 * s(beta1) + q2 * s(beta2) + qb
    err = (s(gamma) - c) * ds(gamma)
    d1, d2 = ds(beta1), ds(beta2)
    forms = {
        "U_A.p11": p11 - eps * err * q1 * d1 * a1,
        "U_A.p12": p12 - eps * err * q1 * d1 * a2,
        "U_A.p21": p21 - eps * err * q2 * d2 * a1,
        "U_A.p1b": p1b - eps * err * q1 * d1,
        "U_A.p2b": p2b - eps * err * q1 * d2,
        "U_A.q1": q1 - eps * err * s(beta1),
        "U_A.q2": q2 - eps * err * s(beta2),
        "U_A.qb": qb - eps * err,
        "r_A.a1[with eps]": a1 - eps * err * (q1 * d1 * p11 + q2 * d2 * p21),
        "r_A.a2[with eps]": a2 - eps * err * q1 * d1 * p12,
    }
    repaired = {"U_A.p2b": p2b - eps * err * q2 * d2,
                "r_A.a1": a1 - err * (q1 * d1 * p11 + q2 * d2 * p21),
                "r_A.a2": a2 - err * q1 * d1 * p12}
    # single layers, with their own target b for the first layer
    e1, e2 = s(beta1) - b[0], s(beta2) - b[1]
    forms.update({
        "U_B.p11": p11 - eps * e1 * d1 * a1,
        "U_B.p12": p12 - eps * e1 * d1 * a2,
        "U_B.p21": p21 - eps * e2 * d2 * a1,
        "U_B.p1b": p1b - eps * e2 * d1,
        "U_B.p2b": p2b - eps * e2 * d2,
        "r_B.a1[reference]": a1 - e1 * d1 * p11 + e2 * d2 * p21,
        "r_B.a2[reference]": a2 - s(e1) * d1 * p12,
    })
    repaired.update({"U_B.p1b": p1b - eps * e1 * d1,
                     "r_B.a1": a1 - (e1 * d1 * p11 + e2 * d2 * p21),
                     "r_B.a2": a2 - e1 * d1 * p12})
    zeta = q1 * b[0] + q2 * b[1] + qb
    ec = (s(zeta) - c) * ds(zeta)
    forms.update({
        "U_C.q1": q1 - eps * ec * b[0],
        "U_C.q2": q2 - eps * ec * b[1],
        "U_C.qb": qb - eps * ec,
        "r_C.b1": b[0] - ec * q1,
        "r_C.b2": b[1] - ec * q2,
    })
    return forms, repaired


def suite_section6(ctx: Context):
    rng = ctx.rng
    act = SIGMOID
    eps = float(rng.uniform(0.05, 0.5))
    cfg = DescentConfig(eps)
    IB, IC = layer_param_fn(LAYER_B, act), layer_param_fn(LAYER_C, act)
    LB, LC = descend(cfg, IB), descend(cfg, IC)
    composed = compose_learn(LB, LC)
    monolithic = descend(cfg, implement_network(Network(2, [LAYER_B, LAYER_C]), act))

    reference_ok = ["U_A.p11", "U_A.p12", "U_A.p21", "U_A.p1b", "U_A.q1", "U_A.q2", "U_A.qb",
                  "U_B.p11", "U_B.p12", "U_B.p21", "U_B.p2b",
                  "U_C.q1", "U_C.q2", "U_C.qb", "r_C.b1", "r_C.b2"]
    disputed = {
        "U_A.p2b": "reference form has q1 where the chain rule gives q2",
        "r_A.a1[with eps]": "reference form has a factor eps; the request carries none",
        "r_A.a2[with eps]": "reference form has a factor eps; the request carries none",
        "U_B.p1b": "reference form has the second output's error where the first's belongs",
        "r_B.a1[reference]": "unbalanced bracket; read literally the second term has the wrong sign",
        "r_B.a2[reference]": "reference form has sigma applied to the error",
    }
    repaired_of = {"r_A.a1[with eps]": "r_A.a1", "r_A.a2[with eps]": "r_A.a2",
                   "r_B.a1[reference]": "r_B.a1", "r_B.a2[reference]": "r_B.a2"}
    dev = {"implement": 0.0, "update": 0.0, "request": 0.0}
    ok = {k: 0.0 for k in reference_ok}
    fixed = {k: 0.0 for k in ("U_A.p2b", "r_A.a1", "r_A.a2", "U_B.p1b", "r_B.a1", "r_B.a2")}
    wrong = {k: 0.0 for k in disputed}
    p11_check = 0.0
    table = None

    for t in range(ctx.trials):
        p, q = rng.uniform(-1, 1, size=5), rng.uniform(-1, 1, size=3)
        a, b = rng.uniform(-1, 1, size=2), rng.uniform(-1, 1, size=2)
        c = rng.uniform(-1, 1, size=1)
        pq = concat(p, q)
        u_comp, r_comp = composed.update_request(pq, a, c)
        u_mono, r_mono = monolithic.update_request(pq, a, c)
        dev["implement"] = max(dev["implement"],
                               max_abs_diff(composed.implement(pq, a), monolithic.implement(pq, a)))
        dev["update"] = max(dev["update"], max_abs_diff(u_comp, u_mono))
        dev["request"] = max(dev["request"], max_abs_diff(r_comp, r_mono))

        uB, rB = LB.update_request(p, a, b)
        hidden = IB.forward(p, a)
        uC, rC = LC.update_request(q, b, c)
        actual = {f"U_A.{n}": v for n, v in zip(P_NAMES + Q_NAMES, u_comp)}
        actual.update({"r_A.a1": r_comp[0], "r_A.a2": r_comp[1]})
        actual.update({f"U_B.{n}": v for n, v in zip(P_NAMES, uB)})
        actual.update({"r_B.a1": rB[0], "r_B.a2": rB[1]})
        actual.update({f"U_C.{n}": v for n, v in zip(Q_NAMES, uC)})
        actual.update({"r_C.b1": rC[0], "r_C.b2": rC[1]})

        forms, repaired = _section6_forms(p, q, a, float(c[0]), b, eps, act)
        for k in ok:
            ok[k] = max(ok[k], abs(actual[k] - forms[k]))
        for k in fixed:
            fixed[k] = max(fixed[k], abs(actual[k] - repaired[k]))
        for k in wrong:
            wrong[k] = max(wrong[k], abs(actual[repaired_of.get(k, k)] - forms[k]))

        # the single coordinate worked by hand: p11 of U_B * U_C
        r_c = LC.request(q, hidden, c)
        p11 = p[0] - eps * (hidden[0] - r_c[0]) * act.dsigma(p[0] * a[0] + p[1] * a[1] + p[3]) * a[0]
        p11_check = max(p11_check, abs(p11 - forms["U_A.p11"]), abs(p11 - u_comp[0]))

        if t == 0:
            table = _side_by_side(pq, a, c, u_comp, r_comp, u_mono, r_mono, forms, repaired)

    for k, v in dev.items():
        ctx.check(f"section6.composed_vs_monolithic.{k}", v, CHAIN.abs)
    for k, v in ok.items():
        ctx.check(f"section6.{k}", v, CHAIN.abs)
    for k, v in fixed.items():
        ctx.check(f"section6.{k}[repaired]", v, CHAIN.abs)
    ctx.check("section6.U_BxU_C.p11", p11_check, CHAIN.abs)
    for k, note in disputed.items():
        ctx.report.discrepancy(f"section6.{k}", wrong[k], note)
    ctx.report.results["section6"] = {"eps": eps, "points": ctx.trials}
    ctx.report.tables["section6"] = table


def _side_by_side(pq, a, c, u_comp, r_comp, u_mono, r_mono, forms, repaired):
    rows = []
    for i, name in enumerate(P_NAMES + Q_NAMES):
        key = f"U_A.{name}"
        rows.append({"coordinate": key, "composed": float(u_comp[i]),
                     "monolithic": float(u_mono[i]), "reference": float(forms[key]),
                     "repaired": float(repaired.get(key, forms[key]))})
    for i in range(2):
        key = f"r_A.a{i + 1}"
        rows.append({"coordinate": key, "composed": float(r_comp[i]),
                     "monolithic": float(r_mono[i]),
                     "reference": float(forms[f"{key}[with eps]"]),
                     "repaired": float(repaired[key])})
    return {"point": {"p": [float(v) for v in pq[:5]], "q": [float(v) for v in pq[5:]],
                      "a": [float(v) for v in a], "c": [float(v) for v in c]},
            "rows": rows}


# gradients

def builtin_param_fns(rng) -> dict[str, ParamFn]:
    """One instance of every built-in parametrised function."""
    fns = {
        "identity": identity_para(3),
        "swap": swap_para(2, 3),
        "constant": param_constant(3),
        "scalar_mult": scalar_mult_para(),
        "linear": linear_para(rng.uniform(-1, 1, size=(3, 2))),
        "trivialise": trivialise(scalar_mult_para()),
        "tie_weights": gen.tie_weights(parallel_para(scalar_mult_para(), scalar_mult_para()), 2),
        "mu": gen.LinearMap(1, 2, [1, 1]).para(),
        "delta": gen.LinearMap(2, 1, [1, 1]).para(),
    }
    for name, act in ACTIVATIONS.items():
        fns[f"pointwise[{name}]"] = gen.pointwise(act, 3)
        fns[f"layer.full[{name}]"] = layer_param_fn(Layer.full(3, 2), act)
        fns[f"layer.sparse[{name}]"] = layer_param_fn(LAYER_B, act)
    fns["network"] = implement_network(Network(2, [LAYER_B, LAYER_C]), SIGMOID)
    fns["series"] = compose_para(fns["linear"], fns["layer.full[tanh]"])
    fns["parallel"] = parallel_para(fns["scalar_mult"], fns["layer.sparse[sigmoid]"])
    return fns


def suite_gradients(ctx: Context):
    rng = ctx.rng
    for name, F in builtin_param_fns(rng).items():
        ctx.check(f"pullback.{name}", pullback_error(F, rng, points=ctx.trials),
                  GRADIENT_RTOL, "relative")

    for name, act in ACTIVATIONS.items():
        x = rng.uniform(-3, 3, size=ctx.trials)
        numeric = finite_diff_pullback(act.sigma, x, np.ones_like(x))
        ctx.check(f"activation.derivative[{name}]", relative_error(act.dsigma(x), numeric),
                  GRADIENT_RTOL, "relative")

    for model in (quadratic(), cross_entropy(), xy_error()):
        lo, hi = (0.05, 0.95) if model.name == "cross_entropy" else (-1.0, 1.0)
        z = rng.uniform(lo, hi, size=ctx.trials)
        y = rng.uniform(lo, hi, size=ctx.trials)
        numeric = finite_diff_pullback(lambda v: model.e(v, y), z, np.ones_like(z))
        ctx.check(f"error.derivative[{model.name}]",
                  relative_error(model.de_dx(z, y), numeric), GRADIENT_RTOL, "relative")
        if model.name != "xy":
            # f_z is the inverse of y -> de/dx(z, y)
            v = model.de_dx(z, y)
            ctx.check(f"error.inverse[{model.name}]",
                      max_abs_diff(model.inv_de_dx(z, v), y), CHAIN.abs)
        else:
            v = rng.uniform(-1, 1, size=ctx.trials)
            ctx.check("error.inverse[xy]", max_abs_diff(model.de_dx(z, model.inv_de_dx(z, v)), v),
                      EXACT.abs)


# cross entropy

def _ce_requests(F: ParamFn, p, a, b):
    """Implemented, domain-normalised, codomain-normalised and reference requests."""
    out, back = F.vjp(p, a)
    n, m = F.in_dim, F.out_dim
    _, jac_sum = back((out - b) / (out * (1 - out)))
    reference = a - (n / m) * a * (1 - a) * jac_sum
    codomain = a - a * (1 - a) * jac_sum
    return reference, codomain


def suite_cross_entropy(ctx: Context):
    rng = ctx.rng
    model = cross_entropy()
    cfg = DescentConfig(0.01, model)
    _functoriality_series(ctx, cfg, "cross_entropy.functoriality.series", CHAIN.abs)

    sampler = sampler_for(model)
    cod_cfg = DescentConfig(0.01, model, request_norm="codomain")
    display_dev = literal_dev = cod_series = 0.0
    upd_display = 0.0
    ratios = []
    rows = []
    for t in range(ctx.trials):
        n, k, m = ctx.width(), ctx.width(), ctx.width()
        F, G = sigmoid_layer(n, k), sigmoid_layer(k, m)
        L = descend(cfg, F)
        Lc = descend(cod_cfg, F)
        p, a, b = sampler(rng, L)
        got = L.request(p, a, b)
        reference, literal = _ce_requests(F, p, a, b)
        display_dev = max(display_dev, max_abs_diff(got, reference))
        literal_dev = max(literal_dev, max_abs_diff(Lc.request(p, a, b), literal))
        ratio = float(np.max(np.abs(reference - a)) / max(np.max(np.abs(literal - a)), 1e-300))
        ratios.append(ratio)
        out, back = F.vjp(p, a)
        gp, _ = back((out - b) / (out * (1 - out)))
        upd_display = max(upd_display, max_abs_diff(L.update(p, a, b), p - cfg.eps * gp))
        cod = learner_deviation(descend(cod_cfg, compose_para(F, G)),
                                compose_learn(descend(cod_cfg, F), descend(cod_cfg, G)),
                                1, rng, sampler=sampler, retry_on=(DomainError,))
        cod_series = max(cod_series, cod.worst)
        if t < 5:
            rows.append({"in_dim": n, "out_dim": m, "implemented": [float(v) for v in got],
                         "reference": [float(v) for v in reference],
                         "codomain_normalised": [float(v) for v in literal],
                         "correction_ratio": ratio, "in_over_out": n / m})

    ctx.check("cross_entropy.request_matches_reference_form", display_dev, CHAIN.abs)
    ctx.check("cross_entropy.codomain_request_closed_form", literal_dev, CHAIN.abs)
    ctx.report.tables["cross_entropy.requests"] = rows
    ctx.report.discrepancy(
        "cross_entropy.request_normalisation", max(abs(r - 1.0) for r in ratios),
        "normalising the request by alpha of the output dimension differs from the "
        "implemented form by the factor in_dim/out_dim; deviation is max |ratio - 1|")
    ctx.report.discrepancy(
        "cross_entropy.functoriality.series[codomain]", cod_series,
        "series composition with the output-normalised request")
    ctx.report.discrepancy(
        "cross_entropy.update_display", upd_display,
        "the reference update uses (I - b) without the 1/out_dim average; descent on "
        "e = y ln x + (1 - y) ln(1 - x) gives (b - I)/out_dim")
    ctx.report.discrepancy(
        "cross_entropy.functoriality.parallel",
        _functoriality_parallel(ctx, cfg),
        "averaging over outputs does not split over a parallel product")


SUITES: dict[str, Callable[[Context], None]] = {
    "learn-axioms": suite_learn_axioms,
    "para-axioms": suite_para_axioms,
    "functoriality": suite_functoriality,
    "bimonoid": suite_bimonoid,
    "neurons": suite_neurons,
    "section6": suite_section6,
    "gradients": suite_gradients,
    "cross-entropy": suite_cross_entropy,
}

DEFAULT_TRIALS = {"neurons": 50, "section6": 20, "gradients": 5}


def run_suite(name: str, seed: int = 0, trials: int | None = None,
              tol: float | None = None) -> Report:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    trials = DEFAULT_TRIALS.get(name, 100) if trials is None else trials
    if trials < 1:
        raise ValueError("trials must be at least 1")
    command = {"command": "verify", "suite": name, "trials": trials}
    if tol is not None:
        command["tol"] = tol
    report = Report(command=command, seed=seed)
    SUITES[name](Context(report, make_rng(seed), trials, tol))
    return report
