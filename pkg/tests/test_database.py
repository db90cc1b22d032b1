"""
Тесты сохранения результатов bench и validate в SQLite.
"""
import json
import logging
from fractions import Fraction

from database.db_manager import db_manager
from database.models import BenchRecord, ValidationRun

logging.basicConfig(level=logging.INFO, format="%(levelname)s - %(message)s")
logger = logging.getLogger(__name__)


class TestDatabaseManager:
    """Запись и чтение результатов."""

    def test_bench_records(self):
        """Строки bench сохраняются и читаются новыми первыми."""
        logger.info("=== Тест: сохранение bench ===")
        rows = [
            {"case": "cusp", "method": "2", "invariant": ["2/1", "3/1"],
             "counters": {"derivative_generators": 3}, "time": 0.01},
            {"case": "cusp", "method": "atw", "invariant": ["2/1", "3/1"],
             "counters": {"exponent_sum": 3}, "time": 0.02},
        ]
        assert db_manager.save_bench_records("worked", rows) == 2
        records = db_manager.get_recent_bench_records(case_id="cusp")
        assert len(records) == 2
        assert all(isinstance(r, BenchRecord) for r in records)
        assert records[0].method == "atw"
        assert json.loads(records[0].counters) == {"exponent_sum": 3}
        assert db_manager.get_recent_bench_records(case_id="whitney") == []
        logger.info("✅ Тест пройден: сохранение bench")

    def test_validation_run(self):
        """Результат набора свойств возвращается отсоединенным от сессии."""
        run = db_manager.save_validation_run("numerical_theorem", 0, 10, 10, False, "counterexample: ...")
        assert isinstance(run, ValidationRun)
        assert run.id is not None
        assert not run.passed
        assert run.failure.startswith("counterexample")

    def test_invariants_stored_as_rationals(self):
        """Инвариант хранится в форме p/q, как в отчетах CLI."""
        rows = [{"case": "x4y5z6", "method": "atw", "invariant": (Fraction(4), Fraction(5), Fraction(6)),
                 "counters": {}, "time": 0.0},
                {"case": "newton-curve", "method": "1", "invariant": (Fraction(4), Fraction(16, 3)),
                 "counters": {}, "time": 0.0}]
        db_manager.save_bench_records("worked", rows)
        stored = {r.case_id: json.loads(r.invariant) for r in db_manager.get_recent_bench_records()}
        assert stored == {"x4y5z6": ["4/1", "5/1", "6/1"], "newton-curve": ["4/1", "16/3"]}
