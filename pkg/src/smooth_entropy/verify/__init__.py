"""Randomized and structured verification suites with CSV/JSON reports."""

from .harness import build_spec, parse_suite, run_check, run_suite, traceability_markdown, traceability_table, trial_grid
from .models import CheckSpec, SuiteReport, TrialRecord, VerificationReport
from .registry import REGISTRY, CheckEntry, Measurement, TrialContext, get_check, list_checks, register
from .storage import ReportStorageConfig, ReportStorageService

__all__ = [
    "REGISTRY",
    "CheckEntry",
    "CheckSpec",
    "Measurement",
    "ReportStorageConfig",
    "ReportStorageService",
    "SuiteReport",
    "TrialContext",
    "TrialRecord",
    "VerificationReport",
    "build_spec",
    "get_check",
    "list_checks",
    "parse_suite",
    "register",
    "run_check",
    "run_suite",
    "traceability_markdown",
    "traceability_table",
    "trial_grid",
]
