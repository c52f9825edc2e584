import csv
import json
import logging
import os
from pathlib import Path
from typing import Dict, Optional

from pydantic import BaseModel, Field

from smooth_entropy.verify.models import SuiteReport

CSV_COLUMNS = [
    "check_id",
    "trial",
    "seed",
    "dims",
    "epsilon",
    "alpha",
    "n",
    "input_digest",
    "lhs",
    "rhs",
    "slack",
    "passed",
    "bound_mode",
]


def format_number(value: Optional[float]) -> str:
    """12 significant digits; empty for missing values."""
    if value is None:
        return ""
    return format(float(value), ".12g")


class ReportStorageConfig(BaseModel):
    """Where and how verification reports are written."""
    report_dir: str = Field(
        default_factory=lambda: os.environ.get("SMOOTH_ENTROPY_REPORT_DIR", "verification_reports"),
        description="Directory for report.csv and summary.json",
    )
    enable_csv: bool = Field(True, description="Write one CSV row per trial")
    enable_summary: bool = Field(True, description="Write the JSON summary")
    include_runtime: bool = Field(True, description="Include wall-clock fields in the summary")
    csv_filename: str = Field("report.csv", description="Name of the per-trial CSV file")
    summary_filename: str = Field("summary.json", description="Name of the JSON summary file")

    @property
    def report_path(self) -> Path:
        return Path(self.report_dir)

    @property
    def csv_path(self) -> Path:
        return self.report_path / self.csv_filename

    @property
    def summary_path(self) -> Path:
        return self.report_path / self.summary_filename


class ReportStorageService:
    """Writes suite reports to disk."""

    def __init__(self, config: Optional[ReportStorageConfig] = None):
        self.config = config or ReportStorageConfig()
        self.logger = logging.getLogger(__name__)

    def _ensure_report_directory(self):
        self.config.report_path.mkdir(parents=True, exist_ok=True)

    def write_csv(self, suite: SuiteReport) -> Optional[Path]:
        if not self.config.enable_csv:
            return None
        self._ensure_report_directory()
        path = self.config.csv_path
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS, lineterminator="\n")
            writer.writeheader()
            for report in suite.reports:
                for r in report.records:
                    writer.writerow({
                        "check_id": r.check_id,
                        "trial": r.trial,
                        "seed": r.seed,
                        "dims": "x".join(str(d) for d in r.dims),
                        "epsilon": format_number(r.epsilon),
                        "alpha": format_number(r.alpha),
                        "n": "" if r.n is None else r.n,
                        "input_digest": r.input_digest,
                        "lhs": format_number(r.lhs),
                        "rhs": format_number(r.rhs),
                        "slack": format_number(r.slack),
                        "passed": r.passed,
                        "bound_mode": r.bound_mode,
                    })
        self.logger.debug(f"Wrote {suite.total_trials} trial rows to {path}")
        return path

    def summary(self, suite: SuiteReport) -> Dict:
        checks = []
        for report in suite.reports:
            entry = {
                "check_id": report.check_id,
                "claim": report.claim,
                "anchor": report.anchor,
                "mode": "bound-mode" if report.bound_mode else "exact",
                "negated": report.negated,
                "trials": len(report.records),
                "failures": report.failures,
                "min_slack": report.min_slack,
                "violations": [
                    r.model_dump(mode="json", include={"trial", "seed", "lhs", "rhs", "slack", "details", "state_json"})
                    for r in report.violations
                ],
            }
            if self.config.include_runtime:
                entry["runtime_s"] = report.runtime_s
            checks.append(entry)
        data = {
            "total_trials": suite.total_trials,
            "total_failures": suite.total_failures,
            "exit_code": suite.exit_code,
            "checks": checks,
            "config": suite.config_echo,
        }
        if self.config.include_runtime:
            data["runtime_s"] = suite.runtime_s
        return data

    def write_summary(self, suite: SuiteReport) -> Optional[Path]:
        if not self.config.enable_summary:
            return None
        self._ensure_report_directory()
        path = self.config.summary_path
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.summary(suite), f, indent=2, sort_keys=True)
            f.write("\n")
        self.logger.debug(f"Wrote summary to {path}")
        return path

    def store_suite(self, suite: SuiteReport) -> bool:
        """Write every enabled output; False when any write failed."""
        try:
            self.write_csv(suite)
            self.write_summary(suite)
        except OSError as e:
            self.logger.error(f"Failed to write verification reports to {self.config.report_path}: {e}")
            return False
        self.logger.info(f"Stored verification reports in {self.config.report_path}")
        return True
