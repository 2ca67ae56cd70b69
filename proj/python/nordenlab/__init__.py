"""Python access to the nordenlab C++ core."""

import json

from ._core import (
    ArgumentError,
    Chart,
    EvalError,
    Expression,
    InputError,
    ParseError,
    ValidationError,
    chart_from_json,
    check_json,
    classify,
    closed_form_table,
    conformal_flat,
    fields,
    flat_kahler,
    load_chart,
    run_cli,
    suite_ids,
)


def check(chart, suite="all", *, points=16, seed=42, tol=1e-8, lam=(0.3, -0.7, 0.2, 0.5)):
    """Run a suite and return the reports as a list of dicts."""
    return json.loads(check_json(chart, suite, points, seed, tol, list(lam)))


def all_passed(reports):
    return all(r["status"] != "fail" for r in reports)


__all__ = [
    "ArgumentError",
    "Chart",
    "EvalError",
    "Expression",
    "InputError",
    "ParseError",
    "ValidationError",
    "all_passed",
    "chart_from_json",
    "check",
    "classify",
    "closed_form_table",
    "conformal_flat",
    "fields",
    "flat_kahler",
    "load_chart",
    "run_cli",
    "suite_ids",
]
