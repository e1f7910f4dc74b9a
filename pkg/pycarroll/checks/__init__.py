"""Verification checks, reports and the property suites."""

from pycarroll.checks.base import (
    CheckBase,
    CheckResult,
    EqualFormsCheck,
    PredicateCheck,
    Report,
    ZeroFormCheck,
    run_checks,
)
from pycarroll.checks.suites import property_suite

__all__ = [
    "CheckBase",
    "CheckResult",
    "EqualFormsCheck",
    "PredicateCheck",
    "Report",
    "ZeroFormCheck",
    "property_suite",
    "run_checks",
]
