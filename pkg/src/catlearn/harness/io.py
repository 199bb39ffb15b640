"""Datasets, parameter files and JSON reports."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..exceptions import DimensionError
from ..numeric import as_floats

SCHEMA_VERSION = 1


@dataclass
class Dataset:
    """Rows of training data; ``inputs`` is ``(rows, in_dim)``, ``targets`` ``(rows, out_dim)``."""

    inputs: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        self.inputs = np.asarray(self.inputs, dtype=np.float64).reshape(len(self.inputs), -1)
        self.targets = np.asarray(self.targets, dtype=np.float64).reshape(len(self.targets), -1)
        if self.inputs.shape[0] != self.targets.shape[0]:
            raise DimensionError("inputs and targets have different row counts")
        if not (np.all(np.isfinite(self.inputs)) and np.all(np.isfinite(self.targets))):
            raise ValueError("dataset contains non-finite values")

    def __len__(self):
        return self.inputs.shape[0]

    @property
    def in_dim(self) -> int:
        return self.inputs.shape[1]

    @property
    def out_dim(self) -> int:
        return self.targets.shape[1]

    def rows(self):
        return zip(self.inputs, self.targets)

    def __eq__(self, other):
        return (isinstance(other, Dataset)
                and np.array_equal(self.inputs, other.inputs)
                and np.array_equal(self.targets, other.targets))


def parse_dataset(text: str, in_dim: int, out_dim: int) -> Dataset:
    """Headerless CSV: the first ``in_dim`` columns are inputs, the next ``out_dim`` targets."""
    inputs, targets = [], []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != in_dim + out_dim:
            raise DimensionError(
                f"line {lineno}: expected {in_dim + out_dim} columns, got {len(row)}",
                expected=in_dim + out_dim, actual=len(row))
        try:
            values = [float(cell) for cell in row]
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        inputs.append(values[:in_dim])
        targets.append(values[in_dim:])
    if not inputs:
        raise ValueError("dataset is empty")
    return Dataset(np.array(inputs).reshape(-1, in_dim), np.array(targets).reshape(-1, out_dim))


def serialize_dataset(data: Dataset) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    for a, b in data.rows():
        writer.writerow([repr(float(v)) for v in np.concatenate([a, b])])
    return out.getvalue()


def load_dataset(path, in_dim: int, out_dim: int) -> Dataset:
    return parse_dataset(Path(path).read_text(), in_dim, out_dim)


def load_params(path, dim: int | None = None) -> np.ndarray:
    data = json.loads(Path(path).read_text())
    params = np.asarray(data["params"] if isinstance(data, dict) else data, dtype=np.float64)
    if dim is not None and params.shape != (dim,):
        raise DimensionError(f"parameter file has {params.size} values, network needs {dim}",
                             expected=dim, actual=params.size)
    return params


def dump_params(params) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, "params": as_floats(params)}) + "\n"


@dataclass
class Check:
    name: str
    max_abs_deviation: float
    tolerance: float
    metric: str = "abs"

    @property
    def passed(self) -> bool:
        return bool(self.max_abs_deviation <= self.tolerance)

    def as_dict(self) -> dict:
        d = {"name": self.name, "max_abs_deviation": float(self.max_abs_deviation),
             "tolerance": float(self.tolerance), "passed": self.passed}
        if self.metric != "abs":
            d["metric"] = self.metric
        return d


@dataclass
class Report:
    """Outcome of one command.  Passes iff every check passes and no error occurred."""

    command: dict
    seed: int | None = None
    checks: list[Check] = field(default_factory=list)
    discrepancies: list[dict] = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    error: str | None = None
    timing: float | None = None

    def check(self, name: str, deviation: float, tolerance: float, metric: str = "abs") -> Check:
        c = Check(name, float(deviation), float(tolerance), metric)
        self.checks.append(c)
        return c

    def discrepancy(self, name: str, deviation: float, note: str, **extra):
        self.discrepancies.append({"name": name, "max_abs_deviation": float(deviation),
                                   "note": note, **extra})

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def failed_checks(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        d = {"schema_version": SCHEMA_VERSION, "command": self.command, "seed": self.seed,
             "passed": self.passed, "checks": [c.as_dict() for c in self.checks]}
        if self.discrepancies:
            d["discrepancies"] = self.discrepancies
        if self.tables:
            d["tables"] = self.tables
        if self.results:
            d["results"] = self.results
        if self.error is not None:
            d["error"] = self.error
        if self.timing is not None:
            d["timing_seconds"] = self.timing
        return d

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, allow_nan=False) + "\n"
