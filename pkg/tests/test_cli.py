"""
Тесты командной строки: отчеты, коды выхода, запись в файл.
"""
import json
import logging
from functools import partial
from unittest.mock import patch

import pytest

from cli import app
from cli.validation import run_validation

logging.basicConfig(level=logging.INFO, format="%(levelname)s - %(message)s")
logger = logging.getLogger(__name__)


def run(capsys, *argv):
    code = app.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCentreCommands:
    """invariant и centre."""

    def test_whitney_umbrella(self, capsys):
        """JSON-отчет для x^2 - y^2*z."""
        logger.info("=== Тест: invariant для зонтика Уитни ===")
        code, out, _ = run(capsys, "invariant", "--vars", "x,y,z", "--ideal", "x^2-y^2*z")
        assert code == 0
        data = json.loads(out)
        assert data["invariant"] == ["2/1", "3/1", "3/1"]
        assert data["weights"] == [3, 2, 2]
        assert data["marking"] == 6
        assert data["method"] == "2"
        assert "trace" not in data
        logger.info("✅ Тест пройден: invariant для зонтика Уитни")

    def test_smooth_hypersurface(self, capsys):
        """x в двух переменных: инвариант (1)."""
        code, out, _ = run(capsys, "invariant", "--vars", "x,y", "--ideal", "x", "--method", "1")
        assert code == 0
        assert json.loads(out)["invariant"] == ["1/1"]

    def test_centre_has_trace(self, capsys):
        """centre добавляет пошаговую трассу."""
        code, out, _ = run(capsys, "centre", "--vars", "x,y", "--ideal", "x^4 + x*y^4 + y^6")
        assert code == 0
        data = json.loads(out)
        assert data["invariant"] == ["4/1", "16/3"]
        assert len(data["trace"]) == 2

    def test_atw_big_integers(self, capsys):
        """b_3 печатается как 36*29!."""
        code, out, _ = run(capsys, "invariant", "--vars", "x,y,z", "--ideal", "x^4+y^5+z^6", "--method", "atw")
        assert code == 0
        data = json.loads(out)
        assert data["b"] == [4, 30, "36*29!"]
        assert data["a"] == ["4/1", "5/1", "6/1"]

    def test_atw_full_mode_overflows(self, capsys):
        """Полный режим: MathError и код 3."""
        code, out, err = run(capsys, "invariant", "--vars", "x,y,z", "--ideal", "x^4+y^5+z^6",
                             "--method", "atw", "--mode", "full")
        assert code == 3
        assert out == ""
        assert "exponent overflow; use order-only" in err

    def test_text_format_to_file(self, capsys, tmp_path):
        """--format text и --out: stdout пуст, файл записан."""
        target = tmp_path / "report.txt"
        code, out, _ = run(capsys, "invariant", "--vars", "x,y", "--ideal", "x^2-y^3",
                           "--format", "text", "--out", str(target))
        assert code == 0
        assert out == ""
        assert target.read_text(encoding="utf-8").startswith('invariant: ["2/1", "3/1"]\n')


class TestExitCodes:
    """Ошибки разбора - 2, математические - 3."""

    def test_parse_error(self, capsys):
        code, _, err = run(capsys, "invariant", "--vars", "x,y", "--ideal", "x^2 + w")
        assert code == 2
        assert "unknown identifier" in err

    def test_point_off_variety(self, capsys):
        code, _, err = run(capsys, "invariant", "--vars", "x,y,z", "--ideal", "x^2-y^2*z", "--point", "1,0,0")
        assert code == 3
        assert "point not on the variety" in err

    def test_negative_point(self, capsys):
        """Отрицательные координаты передаются через --point=..."""
        code, out, _ = run(capsys, "invariant", "--vars", "x,y,z", "--ideal", "x^2-y^2*z", "--point=0,0,-2")
        assert code == 0
        assert json.loads(out)["invariant"] == ["2/1", "2/1"]


class TestOtherCommands:
    """blowup, resolve, bench, validate, newton-svg."""

    def test_blowup(self, capsys):
        code, out, _ = run(capsys, "blowup", "--vars", "x,y", "--ideal", "x^2-y^3")
        assert code == 0
        charts = json.loads(out)["charts"]
        assert [chart["ideal"] for chart in charts] == [["-y^3 + 1"], ["x^2 - 1"]]

    def test_resolve(self, capsys):
        code, out, _ = run(capsys, "resolve", "--vars", "x,y", "--ideal", "x^2-y^3", "--samples", "1,1")
        assert code == 0
        data = json.loads(out)
        assert data["steps"] == 1
        assert data["complete"] is True

    def test_bench_without_record(self, capsys):
        """Таблица сравнения и отношения счетчиков."""
        code, out, _ = run(capsys, "bench", "--no-record", "--format", "text")
        assert code == 0
        assert "ratio" in out

    def test_validate_and_mutation(self, capsys):
        """validate проходит; с мутацией xi_sign - код 1."""
        code, out, _ = run(capsys, "validate", "--fuzz", "3", "--seed", "0", "--no-record")
        assert code == 0
        assert json.loads(out)["passed"] is True

        theorem_only = partial(run_validation, only=["numerical_theorem"])
        with patch.object(app, "run_validation", theorem_only):
            code, out, _ = run(capsys, "validate", "--fuzz", "200", "--mutation", "xi_sign", "--no-record")
        assert code == 1
        assert json.loads(out)["passed"] is False

    def test_newton_svg(self, capsys, tmp_path):
        target = tmp_path / "newton.svg"
        code, out, _ = run(capsys, "newton-svg", "--vars", "x,y", "--ideal", "x^4 + x*y^4 + y^6",
                           "--out", str(target))
        assert code == 0
        assert target.exists()
        assert json.loads(out)["dots"] == [[4, 0], [1, 4], [0, 6]]

    @pytest.mark.parametrize("argv", [["frobnicate"], ["invariant", "--ideal", "x"]])
    def test_usage_errors(self, argv):
        """Неизвестная команда или пропущенный --vars - выход argparse."""
        with pytest.raises(SystemExit) as error:
            app.main(argv)
        assert error.value.code == 2
