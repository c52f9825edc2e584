"""
Tests for writing verification reports to disk.
"""

import csv
import json

import pytest

from smooth_entropy.verify import ReportStorageConfig, ReportStorageService, run_suite
from smooth_entropy.verify.storage import CSV_COLUMNS, format_number


@pytest.fixture
def small_suite():
    report, _ = run_suite({"dpi_vn": {"trials": 3}, "renyi_additivity": {"trials": 2}})
    return report


@pytest.fixture
def storage(tmp_path) -> ReportStorageService:
    return ReportStorageService(ReportStorageConfig(report_dir=str(tmp_path / "reports")))


@pytest.mark.unit
class TestFormatting:
    """Number formatting shared by every CSV the tool writes."""

    def test_twelve_significant_digits(self):
        assert format_number(1.0 / 3.0) == "0.333333333333"

    def test_missing_value(self):
        assert format_number(None) == ""

    def test_integers_stay_short(self):
        assert format_number(2.0) == "2"


@pytest.mark.unit
class TestReportStorageConfig:
    """Output locations."""

    def test_default_directory(self, monkeypatch):
        monkeypatch.delenv("SMOOTH_ENTROPY_REPORT_DIR", raising=False)
        assert ReportStorageConfig().report_dir == "verification_reports"

    def test_directory_from_environment(self, monkeypatch, tmp_path):
        monkeypatch.setenv("SMOOTH_ENTROPY_REPORT_DIR", str(tmp_path))
        config = ReportStorageConfig()
        assert config.csv_path == tmp_path / "report.csv"
        assert config.summary_path == tmp_path / "summary.json"


@pytest.mark.unit
class TestReportStorageService:
    """CSV rows and JSON summaries."""

    def test_csv_has_one_row_per_trial(self, storage, small_suite):
        path = storage.write_csv(small_suite)
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            assert reader.fieldnames == CSV_COLUMNS
            rows = list(reader)
        assert len(rows) == 5
        assert rows[0]["check_id"] == "dpi_vn"
        assert rows[0]["dims"] == "2x2x2"
        assert rows[0]["passed"] == "True"
        assert rows[3]["alpha"] == "0.5"

    def test_summary_contents(self, storage, small_suite):
        data = storage.summary(small_suite)
        assert data["total_trials"] == 5
        assert data["total_failures"] == 0
        assert data["exit_code"] == 0
        assert [c["check_id"] for c in data["checks"]] == ["dpi_vn", "renyi_additivity"]
        assert data["checks"][0]["mode"] == "exact"
        assert data["checks"][0]["violations"] == []
        assert data["config"]["dpi_vn"]["trials"] == 3

    def test_runtime_can_be_omitted(self, tmp_path, small_suite):
        service = ReportStorageService(ReportStorageConfig(report_dir=str(tmp_path), include_runtime=False))
        data = service.summary(small_suite)
        assert "runtime_s" not in data
        assert "runtime_s" not in data["checks"][0]

    def test_store_suite_writes_both_files(self, storage, small_suite):
        assert storage.store_suite(small_suite)
        assert storage.config.csv_path.exists()
        summary = json.loads(storage.config.summary_path.read_text())
        assert summary["total_trials"] == 5

    def test_disabled_outputs(self, tmp_path, small_suite):
        config = ReportStorageConfig(report_dir=str(tmp_path / "none"), enable_csv=False, enable_summary=False)
        service = ReportStorageService(config)
        assert service.write_csv(small_suite) is None
        assert service.write_summary(small_suite) is None
        assert not (tmp_path / "none").exists()

    def test_unwritable_directory(self, tmp_path, small_suite):
        blocker = tmp_path / "blocker"
        blocker.write_text("not a directory")
        service = ReportStorageService(ReportStorageConfig(report_dir=str(blocker)))
        assert service.store_suite(small_suite) is False
