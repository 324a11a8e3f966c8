"""Tests for scripts/build_report.py."""

import importlib.util
from pathlib import Path

import pandas as pd
import pytest

from rtw.metadata import create_metadata

SCRIPT = Path(__file__).resolve().parent.parent / "scripts" / "build_report.py"


@pytest.fixture(scope="module")
def build_report():
    spec = importlib.util.spec_from_file_location("build_report", SCRIPT)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def rows():
    return pd.DataFrame(
        [
            {"n": 4, "h": "K3", "f": "K3", "value": 2, "status": "optimal",
             "certificate": "abc", "nodes": 10, "seconds": 0.1},
            {"n": 5, "h": "K3", "f": "K3", "value": 3, "status": "lower_bound_only",
             "certificate": "def", "nodes": 2000, "seconds": 1.5},
        ]
    )


class TestSameConfiguration:
    def test_single_run(self, build_report):
        assert build_report.same_configuration([create_metadata("table rb", {"a": 1})]) is None

    def test_matching_runs(self, build_report):
        runs = [create_metadata("table rb", {"a": 1}), create_metadata("table ex", {"a": 1})]
        assert build_report.same_configuration(runs) is True

    def test_different_runs(self, build_report):
        runs = [create_metadata("table rb", {"a": 1}), create_metadata("table rb", {"a": 2})]
        assert build_report.same_configuration(runs) is False


class TestGenerateReport:
    def test_sections(self, build_report, tmp_path):
        path = tmp_path / "report.md"
        meta = create_metadata("table rb", {"a": 1})
        build_report.generate_report({"rb_k3": rows()}, meta, path, consistent=False)
        text = path.read_text(encoding="utf-8")
        assert "## rb_k3" in text
        assert "| 4 | 2 | optimal |" in text
        assert "| 5 | 3 (>=) | lower_bound_only |" in text
        assert "- **Inexact rows:** 1" in text
        assert "**Same Config Across Runs:** NO" in text

    def test_without_metadata(self, build_report, tmp_path):
        path = tmp_path / "report.md"
        build_report.generate_report({"rb_k3": rows()}, None, path)
        text = path.read_text(encoding="utf-8")
        assert "## Metadata" not in text
        assert "Same Config" not in text
