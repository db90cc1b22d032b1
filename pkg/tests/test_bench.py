"""
Тесты bench: строки по методам, изоляция сбоев, отношения счетчиков.
"""
import logging
from fractions import Fraction
from unittest.mock import patch

from cli import bench
from cli.bench import render_table, run_bench
from config.constants import METHOD_ATW, METHOD_DERIVATIVE, METHOD_NEWTON

logging.basicConfig(level=logging.INFO, format="%(levelname)s - %(message)s")
logger = logging.getLogger(__name__)


class TestBench:
    """run_bench на наборе worked."""

    def test_cusp_rows(self):
        """Каспа: три метода дают (2, 3)."""
        report = run_bench(record=False, cases=["cusp"])
        assert [row["method"] for row in report.rows] == [METHOD_NEWTON, METHOD_DERIVATIVE, METHOD_ATW]
        for row in report.rows:
            assert "error" not in row
            assert row["invariant"] == (Fraction(2), Fraction(3))
        assert report.rows[-1]["b"] == (2, 3)

    def test_failing_method_does_not_abort(self):
        """Сбой одного метода дает ячейку error, остальные строки считаются."""
        logger.info("=== Тест: сбой метода в bench ===")
        with patch.object(bench, "atw_centre", side_effect=RuntimeError("сбой")):
            report = run_bench(record=False, cases=["A1", "cusp"])
        assert len(report.rows) == 6
        failed = [row for row in report.rows if "error" in row]
        assert [row["method"] for row in failed] == [METHOD_ATW, METHOD_ATW]
        assert failed[0]["error"] == "RuntimeError: сбой"
        assert failed[0]["invariant"] == ()
        assert report.rows[0]["invariant"] == (Fraction(2), Fraction(2))
        assert report.ratios == {}
        assert "RuntimeError: сбой" in render_table(report)
        logger.info("✅ Тест пройден: сбой метода в bench")

    def test_ratio_on_surface(self):
        """На x^4+y^5+z^6 показатели ATW на порядок больше числа производных."""
        report = run_bench(record=False, cases=["x4y5z6"], methods=(METHOD_DERIVATIVE, METHOD_ATW))
        assert report.ratios["x4y5z6"] >= 10
        assert report.as_mapping()["rows"][1]["b"] == [4, 30, "36*29!"]
