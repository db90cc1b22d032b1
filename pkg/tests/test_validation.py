"""
Тесты наборов свойств validate и отрицательного контроля.
"""
import logging
from unittest.mock import patch

import pytest

from cli import validation
from cli.validation import IDEAL_DEGREE_CAPS, check_theorem, run_suite, run_validation, theorem_samples
from config.settings import settings
from database.db_manager import db_manager
from utils.exceptions import MathError

logging.basicConfig(level=logging.INFO, format="%(levelname)s - %(message)s")
logger = logging.getLogger(__name__)


class TestValidation:
    """run_validation и run_suite."""

    def test_small_run_passes(self):
        """Все наборы проходят на малом числе примеров."""
        logger.info("=== Тест: validate ===")
        report = run_validation(fuzz=5, seed=0, record=False)
        assert report.passed, report.as_mapping()
        names = [result.name for result in report.results]
        assert names[0] == "sigma_datapoint"
        assert "method_agreement" in names
        logger.info("✅ Тест пройден: validate")

    def test_mutation_is_caught(self):
        """Перевернутый знак Δ ломает числовую теорему."""
        report = run_validation(fuzz=200, seed=0, mutation="xi_sign", record=False,
                                only=["numerical_theorem"])
        assert not report.passed
        failed = [result for result in report.results if not result.passed]
        assert [result.name for result in failed] == ["numerical_theorem"]
        assert failed[0].failure.startswith("counterexample")
        assert report.as_mapping()["mutation"] == "xi_sign"

    def test_unknown_mutation(self):
        with pytest.raises(MathError, match="unknown mutation"):
            run_validation(fuzz=1, mutation="nope", record=False)

    def test_suite_counts_samples(self):
        """run_suite считает проверенные примеры."""
        result = run_suite("numerical_theorem", theorem_samples(), check_theorem, 20, 1)
        assert result.passed
        assert 0 < result.samples <= 20

    def test_results_are_recorded(self):
        """С record=True результаты попадают в БД."""
        report = run_validation(fuzz=3, seed=0, record=True, only=["sigma_bound"])
        assert report.passed
        session = db_manager.get_session()
        try:
            from database.models import ValidationRun
            suites = {run.suite for run in session.query(ValidationRun).all()}
        finally:
            session.close()
        assert suites == {"sigma_datapoint", "sigma_bound"}


class TestValidationBudget:
    """Время и пределы прогона validate."""

    def test_runtime_scales_within_budget(self):
        """Полный прогон укладывается в 60 с на 1000 примеров (с запасом на малый fuzz)."""
        fuzz = 25
        report = run_validation(fuzz=fuzz, seed=42, record=False)
        assert report.passed, report.as_mapping()
        assert report.seconds < 60 * fuzz / 1000 * 5

    def test_fuzz_ideals_stay_under_guard(self):
        """Случайные идеалы не выходят за предел степени Грёбнера validate."""
        for cap in IDEAL_DEGREE_CAPS.values():
            assert cap <= settings.VALIDATE_GUARD_MAX_DEGREE
            assert cap + settings.TRUNC_MARGIN <= settings.VALIDATE_TRUNC_CAP

    def test_invariants_are_shared_between_suites(self):
        """Наборы на одной стратегии считают инвариант идеала один раз."""
        with patch.object(validation, "associated_centre_m2", wraps=validation.associated_centre_m2) as m2:
            run_validation(fuzz=10, seed=3, record=False, only=["gamma_membership", "method_agreement"])
        distinct = [gens for method, gens in validation._INVARIANTS if method == "m2"]
        assert 0 < m2.call_count == len(distinct)
