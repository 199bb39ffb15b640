import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from catlearn.error_models import cross_entropy, quadratic
from catlearn.harness.io import Dataset, parse_dataset, serialize_dataset
from catlearn.nnet import ACTIVATIONS, Layer, layer_param_fn
from catlearn.numeric import Tolerance, approx_eq, max_abs_diff

finite = st.floats(-1e6, 1e6, allow_nan=False)
unit = st.floats(-1, 1, allow_nan=False)
open_unit = st.floats(0.001, 0.999)
vectors = st.lists(finite, min_size=0, max_size=6)
tolerances = st.builds(Tolerance, st.floats(1e-15, 1.0), st.floats(0, 1e-3))


@given(vectors, tolerances)
def test_approx_eq_reflexive(x, tol):
    assert approx_eq(x, x, tol)


@given(st.integers(0, 5).flatmap(lambda n: st.tuples(st.lists(finite, min_size=n, max_size=n),
                                                     st.lists(finite, min_size=n, max_size=n))),
       tolerances)
def test_approx_eq_symmetric(pair, tol):
    x, y = pair
    assert approx_eq(x, y, tol) == approx_eq(y, x, tol)


@given(st.floats(-100, 100), st.floats(-100, 100))
def test_quadratic_inverse(x0, y):
    q = quadratic()
    assert abs(q.inv_de_dx(x0, q.de_dx(x0, y)) - y) <= 1e-9


@given(open_unit, st.floats(-5, 5))
def test_cross_entropy_inverse(z, y):
    ce = cross_entropy()
    got = ce.inv_de_dx(np.array([z]), ce.de_dx(np.array([z]), np.array([y])))
    assert abs(got[0] - y) <= 1e-9 * max(1.0, 1.0 / (z * (1 - z)))


@settings(max_examples=50)
@given(st.lists(unit, min_size=12, max_size=12), st.floats(-3, 3), st.floats(-3, 3),
       st.sampled_from(list(ACTIVATIONS)))
def test_pullback_linear(values, s, t, act):
    F = layer_param_fn(Layer(2, 2, [(1, 1), (2, 1), (2, 2)]), ACTIVATIONS[act])
    p, a = np.array(values[:5]), np.array(values[5:7])
    w1, w2 = np.array(values[7:9]), np.array(values[9:11])
    gp, ga = F.pullback(p, a, s * w1 + t * w2)
    gp1, ga1 = F.pullback(p, a, w1)
    gp2, ga2 = F.pullback(p, a, w2)
    assert max_abs_diff(gp, s * gp1 + t * gp2) <= 1e-9
    assert max_abs_diff(ga, s * ga1 + t * ga2) <= 1e-9


rows = st.integers(1, 5).flatmap(
    lambda r: st.lists(st.lists(finite, min_size=3, max_size=3), min_size=r, max_size=r))


@given(rows)
def test_dataset_round_trip(table):
    arr = np.array(table)
    data = Dataset(arr[:, :2], arr[:, 2:])
    assert parse_dataset(serialize_dataset(data), 2, 1) == data
