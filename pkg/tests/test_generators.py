import numpy as np
import pytest

from catlearn import generators as gen
from catlearn.descent import DescentConfig, descend
from catlearn.error_models import xy_error
from catlearn.learn import learner_deviation
from catlearn.nnet import ACTIVATIONS, Layer, layer_param_fn
from catlearn.numeric import max_abs_diff
from catlearn.para import (param_constant, parallel_para, para_deviation, pullback_error,
                           scalar_mult_para)

CFG = DescentConfig(0.1)
NONE = np.zeros(0)


def test_linear_generators_from_matrices():
    mu = gen.linear_learner(gen.LinearMap(1, 2, [1, 1]), CFG)
    assert mu.request(NONE, [1, 2], [5]).tolist() == [3, 4]
    delta = gen.linear_learner(gen.LinearMap(2, 1, [1, 1]), CFG)
    assert delta.request(NONE, [1], [4, 5]).tolist() == [8]
    eta = gen.linear_learner(gen.LinearMap(1, 0, []), CFG)
    assert eta.implement(NONE, NONE).tolist() == [0]


def test_named_generators():
    assert gen.mu(CFG).implement(NONE, [2, 3]).tolist() == [5]
    assert gen.delta(CFG).implement(NONE, [4]).tolist() == [4, 4]
    assert gen.counit(CFG).implement(NONE, [9]).shape == (0,)


def test_counit_request_is_the_input():
    # the value forced by counitality; see the bimonoid suite for the reference value 0
    assert gen.counit(CFG).request(NONE, [9], NONE).tolist() == [9]


def test_linear_map_entry_count():
    with pytest.raises(ValueError):
        gen.LinearMap(2, 2, [1, 2, 3])


def test_xy_requests():
    cfg = DescentConfig(0.1, xy_error())
    assert gen.mu(cfg).request(NONE, [1, 2], [7]).tolist() == [7, 7]
    assert gen.delta(cfg).request(NONE, [1], [2, 3]).tolist() == [5]


def test_building_block_closed_forms():
    assert descend(DescentConfig(0.5), param_constant(1)).update([2], NONE, [4]) == \
        pytest.approx([3.0])
    assert gen.bias(DescentConfig(0.5)).update([2], NONE, [4]).tolist() == [3.0]
    r = gen.act_learner(ACTIVATIONS["identity"], CFG).request(NONE, [2], [5])
    assert r.tolist() == [5]
    assert gen.scalar_mult(CFG).update([1], [2], [0]) == pytest.approx([0.6])


def test_sum_tree():
    assert gen.sum_tree(CFG, 4).implement(NONE, [1, 2, 3, 4]).tolist() == [10]
    with pytest.raises(ValueError):
        gen.sum_tree(CFG, 0)


@pytest.mark.parametrize("act", ["identity", "sigmoid"])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_neuron_equals_descended_layer(n, act, rng):
    a = ACTIVATIONS[act]
    neuron = gen.build_neuron(n, a, CFG)
    layer = descend(CFG, layer_param_fn(Layer.full(n, 1), a))
    assert learner_deviation(neuron, layer, 50, rng).worst <= 1e-9


def test_neuron_implement():
    N = gen.build_neuron(2, ACTIVATIONS["identity"], CFG)
    assert N.implement([2, 3, 1], [1, 1]).tolist() == [6]


def test_tied_update_sums_contributions():
    F = parallel_para(scalar_mult_para(), scalar_mult_para())
    tied = descend(CFG, gen.tie_weights(F, 2))
    w, (x, y), (b1, b2) = 0.5, (1.0, -2.0), (0.3, 0.7)
    want = w - 0.1 * ((w * x - b1) * x + (w * y - b2) * y)
    assert max_abs_diff(tied.update([w], [x, y], [b1, b2]), [want]) <= 1e-12


def test_tying_one_copy_is_identity(rng):
    F = layer_param_fn(Layer.full(2, 2), ACTIVATIONS["tanh"])
    assert para_deviation(gen.tie_weights(F, 1), F, 20, rng) <= 1e-12


def test_tied_gradient_against_finite_difference(rng):
    F = layer_param_fn(Layer.full(1, 2), ACTIVATIONS["sigmoid"])
    tied = gen.tie_weights(parallel_para(F, F), 2)
    assert pullback_error(tied, rng) <= 1e-5


def test_tying_needs_equal_blocks():
    with pytest.raises(ValueError):
        gen.tie_weights(layer_param_fn(Layer.full(1, 1), ACTIVATIONS["identity"]), 3)
