"""Exact derived tangent, Harrison and operad computations."""

import json

from ._core import (
    REPORT_SCHEMA,
    BudgetError,
    DhilbError,
    InternalError,
    ValidationError,
    ci_cohomology,
    tangent,
    truncation_dims,
    version,
)
from ._core import run_scenario as _run_scenario

__all__ = [
    "REPORT_SCHEMA",
    "BudgetError",
    "DhilbError",
    "InternalError",
    "ValidationError",
    "ci_cohomology",
    "run_scenario",
    "run_scenario_file",
    "tangent",
    "truncation_dims",
    "version",
]


def run_scenario(yaml_text, source="<string>", field=None, threads=1, task=None):
    """Run a YAML scenario. Returns (report dict, exit code); errors are reported, not raised."""
    report, _text, code = _run_scenario(yaml_text, source, field, threads, task)
    return json.loads(report), code


def run_scenario_file(path, **kwargs):
    with open(path, encoding="utf-8") as fh:
        return run_scenario(fh.read(), source=str(path), **kwargs)
