"""Experiment reports and their CSV/JSON serializations."""
from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

CSV_HEADER = ("quantity", "computed", "reference", "residual", "tolerance", "pass")
RELATIONS = ("abs", "ge", "le")


@dataclass(frozen=True)
class Criterion:
    """One checked quantity.

    ``relation`` selects how the residual is formed:
    ``abs`` -> |computed - reference|, ``ge`` -> shortfall below reference,
    ``le`` -> excess above reference. A criterion passes iff residual <= tolerance.
    """

    quantity: str
    computed: float
    reference: float
    tolerance: float
    relation: str = "abs"
    provenance: str = ""

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "computed", float(self.computed))
        object.__setattr__(self, "reference", float(self.reference))
        object.__setattr__(self, "tolerance", float(self.tolerance))

    @property
    def residual(self) -> float:
        if self.relation == "abs":
            if self.computed == self.reference:
                return 0.0
            return abs(self.computed - self.reference)
        if self.relation == "ge":
            return max(0.0, self.reference - self.computed)
        return max(0.0, self.computed - self.reference)

    @property
    def passed(self) -> bool:
        r = self.residual
        return not math.isnan(r) and r <= self.tolerance


@dataclass
class ExperimentReport:
    experiment: str
    inputs: dict
    criteria: list = field(default_factory=list)
    values: dict = field(default_factory=dict)
    error: Optional[str] = None
    # kept out of serialized output so identical configs give identical bytes
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.criteria)

    def check(self, quantity, computed, reference, tolerance, relation="abs", provenance=""):
        c = Criterion(quantity, computed, reference, tolerance, relation, provenance)
        self.criteria.append(c)
        return c

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "inputs": self.inputs,
            "criteria": [
                {
                    "quantity": c.quantity,
                    "computed": c.computed,
                    "reference": c.reference,
                    "residual": c.residual,
                    "tolerance": c.tolerance,
                    "relation": c.relation,
                    "provenance": c.provenance,
                    "pass": c.passed,
                }
                for c in self.criteria
            ],
            "values": self.values,
            "error": self.error,
            "pass": self.passed,
        }


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def to_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for c in report.criteria:
        w.writerow([c.quantity, fmt(c.computed), fmt(c.reference), fmt(c.residual),
                    fmt(c.tolerance), "true" if c.passed else "false"])
    return buf.getvalue()


def _jsonable(obj: Any):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if hasattr(obj, "item"):  # numpy scalars
        return _jsonable(obj.item())
    return obj


def to_json(report: ExperimentReport) -> str:
    return json.dumps(_jsonable(report.to_dict()), indent=2, ensure_ascii=False) + "\n"


def render(report: ExperimentReport, fmt_name: str = "csv") -> str:
    if fmt_name == "csv":
        return to_csv(report)
    if fmt_name == "json":
        return to_json(report)
    raise ValueError(f"unknown output format {fmt_name!r}; expected csv or json")


def emit_report(report: ExperimentReport, format: str = "csv", destination=None) -> None:
    """Write the report to a path, an open text stream, or stdout when None."""
    text = render(report, format)
    if destination is None:
        sys.stdout.write(text)
        return
    if hasattr(destination, "write"):
        destination.write(text)
        return
    path = Path(destination)
    try:
        path.write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror or exc}") from exc
