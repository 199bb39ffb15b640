"""``catlearn`` command line: verify, train and request."""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from ..descent import DescentConfig, descend, request_iterate
from ..error_models import MODELS, get_model, total_error
from ..exceptions import DimensionError, DomainError, NonFiniteError
from ..nnet import implement_network, load_network
from ..numeric import as_floats, make_rng, vec
from .io import Report, dump_params, load_dataset, load_params
from .suites import SUITES, run_suite

log = logging.getLogger("catlearn")

# errors turned into a failed report rather than a traceback
USER_ERRORS = (OSError, ValueError, KeyError, DimensionError, DomainError, NonFiniteError)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="catlearn",
                                     description="Compositional gradient-descent learners.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--timing", action="store_true",
                        help="include wall-clock seconds in the report")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=list(SUITES))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=_positive_int, default=None)
    v.add_argument("--tol", type=_positive_float, default=None,
                   help="override every check tolerance")

    t = sub.add_parser("train", parents=[common], help="train a network by sequential descent steps")
    t.add_argument("--net", required=True)
    t.add_argument("--data", required=True)
    t.add_argument("--error", choices=sorted(MODELS), default="quadratic")
    t.add_argument("--eps", type=_positive_float, required=True)
    t.add_argument("--epochs", type=_positive_int, required=True)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--init-low", type=float, default=-1.0)
    t.add_argument("--init-high", type=float, default=1.0)
    t.add_argument("--params", help="start from these parameters instead of a random draw")
    t.add_argument("--out", help="write the trained parameters here")

    r = sub.add_parser("request", parents=[common], help="iterate the request function towards a target")
    r.add_argument("--net", required=True)
    r.add_argument("--params", required=True)
    r.add_argument("--input", type=_floats, required=True)
    r.add_argument("--target", type=_floats, required=True)
    r.add_argument("--steps", type=_positive_int, required=True)
    r.add_argument("--error", choices=sorted(MODELS), default="quadratic")
    r.add_argument("--eps", type=_positive_float, default=0.1)
    return parser


def cmd_verify(args) -> Report:
    return run_suite(args.suite, seed=args.seed, trials=args.trials, tol=args.tol)


def _dataset_error(model, F, p, data) -> float:
    return sum(total_error(model, F, p, a, b) for a, b in data.rows())


def cmd_train(args) -> Report:
    report = Report(command={"command": "train", "net": args.net, "data": args.data,
                             "error": args.error, "eps": args.eps, "epochs": args.epochs,
                             "init": {"uniform": [args.init_low, args.init_high]}},
                    seed=args.seed)
    net, act = load_network(args.net)
    F = implement_network(net, act)
    data = load_dataset(args.data, net.width_in, net.width_out)
    model = get_model(args.error)
    learner = descend(DescentConfig(args.eps, model), F)
    if args.params:
        p = load_params(args.params, F.param_dim)
    else:
        if not args.init_low < args.init_high:
            raise ValueError("--init-low must be below --init-high")
        p = make_rng(args.seed).uniform(args.init_low, args.init_high, size=F.param_dim)
    initial = _dataset_error(model, F, p, data)
    for epoch in range(1, args.epochs + 1):
        for row, (a, b) in enumerate(data.rows(), start=1):
            try:
                p = learner.update(p, a, b)
            except (DomainError, NonFiniteError) as exc:
                report.error = f"epoch {epoch}, row {row}: {exc}"
                report.results = {"initial_error": initial, "params": as_floats(p)}
                return report
    report.results = {"rows": len(data), "param_dim": F.param_dim,
                      "initial_error": initial,
                      "final_error": _dataset_error(model, F, p, data),
                      "params": as_floats(p)}
    if args.out:
        Path(args.out).write_text(dump_params(p))
    return report


def cmd_request(args) -> Report:
    report = Report(command={"command": "request", "net": args.net, "params": args.params,
                             "input": args.input, "target": args.target,
                             "steps": args.steps, "error": args.error, "eps": args.eps})
    net, act = load_network(args.net)
    F = implement_network(net, act)
    p = load_params(args.params, F.param_dim)
    a = vec(args.input, F.in_dim, "input")
    b = vec(args.target, F.out_dim, "target")
    traj = request_iterate(DescentConfig(args.eps, get_model(args.error)), F, p, a, b,
                           args.steps)
    report.results = {"points": [as_floats(x) for x in traj.points],
                      "errors": [float(e) for e in traj.errors],
                      "truncated": traj.truncated}
    if traj.truncated:
        report.results["reason"] = traj.reason
        report.error = f"trajectory truncated after {len(traj.points)} points: {traj.reason}"
    return report


COMMANDS = {"verify": cmd_verify, "train": cmd_train, "request": cmd_request}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        report = COMMANDS[args.command](args)
    except USER_ERRORS as exc:
        report = Report(command={"command": args.command}, seed=getattr(args, "seed", None),
                        error=f"{type(exc).__name__}: {exc}")
    elapsed = time.perf_counter() - start
    log.info("%s finished in %.3f s", args.command, elapsed)
    if args.timing:
        report.timing = elapsed
    sys.stdout.write(report.to_json())
    for check in report.failed_checks():
        log.warning("check failed: %s (deviation %.3g > %.3g)", check.name,
                    check.max_abs_deviation, check.tolerance)
    if report.error:
        log.error("%s", report.error)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
