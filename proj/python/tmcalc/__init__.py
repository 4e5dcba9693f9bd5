"""Exact symbolic calculus on tangent bundles."""

from ._core import (
    TmcalcError,
    Value,
    check_naturality,
    d,
    db,
    evaluate,
    lie,
    lift,
    run_suite,
    suite_registry,
    volume_factor,
)

__all__ = [
    "TmcalcError",
    "Value",
    "check_naturality",
    "d",
    "db",
    "evaluate",
    "lie",
    "lift",
    "run_suite",
    "suite_registry",
    "volume_factor",
]
