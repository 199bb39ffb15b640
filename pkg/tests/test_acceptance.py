"""One test per acceptance criterion, each recording a PASS/FAIL line."""
import json
import time

import pytest

from catlearn.descent import DescentConfig, verify_functoriality, verify_monoidal
from catlearn.harness.cli import main
from catlearn.harness.suites import SUITES, run_suite, sigmoid_layer
from catlearn.numeric import make_rng


def _checks(report, prefix):
    return [c for c in report.checks if c.name.startswith(prefix)]


def _worst(checks):
    return max(c.max_abs_deviation for c in checks)


def test_01_series_functoriality(criterion):
    rng = make_rng(1)
    cfg = DescentConfig(0.01)
    start = time.perf_counter()
    worst, points = 0.0, 0
    for _ in range(100):
        n, k, m = (int(rng.integers(1, 5)) for _ in range(3))
        res = verify_functoriality(cfg, sigmoid_layer(n, k), sigmoid_layer(k, m), trials=1,
                                   rng=rng)
        worst = max(worst, res.deviation.worst)
        points += res.deviation.points
    elapsed = time.perf_counter() - start
    ok = points == 100 and worst <= 1e-9 and elapsed <= 5.0
    criterion("1 series functoriality", ok,
              f"max dev {worst:.3g} <= 1e-9 over {points} pairs in {elapsed:.2f} s (<= 5 s)")
    assert ok


def test_02_parallel_functoriality(criterion):
    rng = make_rng(2)
    cfg = DescentConfig(0.01)
    worst = 0.0
    for _ in range(100):
        F = sigmoid_layer(int(rng.integers(1, 5)), int(rng.integers(1, 5)))
        G = sigmoid_layer(int(rng.integers(1, 5)), int(rng.integers(1, 5)))
        worst = max(worst, verify_monoidal(cfg, F, G, trials=1, rng=rng).deviation.worst)
    ok = worst <= 1e-12
    criterion("2 parallel functoriality", ok, f"max dev {worst:.3g} <= 1e-12")
    assert ok


def test_03_two_layer_reconstruction(criterion):
    rep = run_suite("section6", seed=3, trials=20)
    matched = {f"section6.U_A.{k}" for k in ("p11", "p12", "p21", "q1", "q2", "qb")}
    rows = [c for c in rep.checks if c.name in matched]
    consistency = _checks(rep, "section6.composed_vs_monolithic")
    flagged = {d["name"] for d in rep.discrepancies}
    expected_flags = {"section6.U_A.p2b", "section6.r_A.a1[with eps]",
                      "section6.r_A.a2[with eps]"}
    ok = (len(rows) == 6 and all(c.passed for c in rows + consistency)
          and expected_flags <= flagged and rep.passed)
    criterion("3 two-layer reconstruction", ok,
              f"6 reference update rows max dev {_worst(rows):.3g}, composed vs monolithic "
              f"{_worst(consistency):.3g} (<= 1e-9); flagged {sorted(expected_flags & flagged)}")
    assert ok


def test_04_gradient_oracle(criterion):
    rep = run_suite("gradients", seed=4, trials=5)
    pull = _checks(rep, "pullback.")
    ok = bool(pull) and all(c.passed for c in pull)
    criterion("4 gradient oracle", ok,
              f"{len(pull)} built-in functions, worst relative error {_worst(pull):.3g} <= 1e-5")
    assert ok


@pytest.mark.parametrize("suite", ["para-axioms", "learn-axioms"])
def test_05_category_axioms(suite, criterion):
    rep = run_suite(suite, seed=5, trials=100)
    failed = [c.name for c in rep.failed_checks()]
    ok = rep.passed
    criterion(f"5 category axioms ({suite})", ok,
              f"{len(rep.checks)} laws over 100 points, max dev {_worst(rep.checks):.3g} "
              f"<= 1e-12" + (f"; failed {failed}" if failed else ""))
    assert ok


@pytest.fixture(scope="module")
def bimonoid_report():
    return run_suite("bimonoid", seed=6, trials=100)


def test_06a_bimonoid_table_rows(bimonoid_report, criterion):
    rows = _checks(bimonoid_report, "table.")
    failed = [c.name for c in rows if not c.passed]
    ok = not failed
    criterion("6 bimonoid table rows", ok,
              f"{len(rows) - len(failed)}/{len(rows)} rows exact to 1e-12"
              + (f"; failed {failed} (max dev {_worst(rows):.3g})" if failed else ""))
    assert ok, failed


def test_06b_bimonoid_axioms(bimonoid_report, criterion):
    laws = _checks(bimonoid_report, "axiom.")
    ok = all(c.passed for c in laws)
    criterion("6 bimonoid axiom families", ok,
              f"{len(laws)} laws, max dev {_worst(laws):.3g} <= 1e-12")
    assert ok


def test_06c_xy_requests(bimonoid_report, criterion):
    xy = _checks(bimonoid_report, "xy.")
    ok = len(xy) == 2 and all(c.passed for c in xy)
    criterion("6 xy-model requests", ok, f"max dev {_worst(xy):.3g} <= 1e-12")
    assert ok


def test_07_neuron_factorisation(criterion):
    rep = run_suite("neurons", seed=7, trials=50)
    fact = _checks(rep, "neuron.factorisation")
    ok = len(fact) == 8 and all(c.passed for c in fact)
    criterion("7 neuron factorisation", ok,
              f"n in 1..4 x (identity, sigmoid), 50 points, max dev {_worst(fact):.3g} <= 1e-9")
    assert ok


def test_08_convex_training(tmp_path, capsys, criterion):
    net = tmp_path / "net.json"
    net.write_text(json.dumps({"width_in": 1, "activation": "identity",
                               "layers": [{"n_out": 1, "connections": [[1, 1]]}]}))
    data = tmp_path / "data.csv"
    data.write_text("1,2\n")
    start = time.perf_counter()
    code = main(["train", "--net", str(net), "--data", str(data), "--error", "quadratic",
                 "--eps", "0.1", "--epochs", "200", "--seed", "8"])
    elapsed = time.perf_counter() - start
    final = json.loads(capsys.readouterr().out)["results"]["final_error"]
    ok = code == 0 and final <= 1e-6 and elapsed <= 1.0
    criterion("8 convex training", ok,
              f"final total error {final:.3g} <= 1e-6 in {elapsed:.3f} s (<= 1 s)")
    assert ok


def test_09_cross_entropy(criterion):
    rep = run_suite("cross-entropy", seed=9, trials=100)
    series = _checks(rep, "cross_entropy.functoriality.series")
    table = rep.tables.get("cross_entropy.requests", [])
    ratio_shown = bool(table) and all("correction_ratio" in row and "reference" in row
                                      and "codomain_normalised" in row for row in table)
    flagged = any(d["name"] == "cross_entropy.request_normalisation" for d in rep.discrepancies)
    ok = len(series) == 1 and series[0].passed and ratio_shown and flagged
    criterion("9 cross-entropy consistency", ok,
              f"series functoriality max dev {series[0].max_abs_deviation:.3g} <= 1e-9; "
              f"request forms and ratio reported for {len(table)} nets")
    assert ok


def test_10_determinism(criterion):
    differing = [name for name in SUITES
                 if run_suite(name, seed=10).to_json() != run_suite(name, seed=10).to_json()]
    ok = not differing
    criterion("10 determinism", ok,
              f"{len(SUITES) - len(differing)}/{len(SUITES)} suites byte-identical on rerun")
    assert ok
