"""
Тесты взвешенных раздутий: карты, характеры стабилизатора, собственные прообразы, драйвер разрешения.
"""
import logging
from fractions import Fraction
from unittest.mock import patch

import pytest

from algebra.ideal import Ideal
from blowup.engine import (
    blow_up,
    chart_character,
    chart_substitution,
    check_initialisation_invariance,
    initial_form,
    inspection_points,
    resolve,
    transform_characters,
)
from centres.invariants import compare_inv
from centres.method_two import associated_centre_m2
from centres.weighting import MarkedCentre
from config.constants import FORMAT_JSON, FORMAT_TEXT, MESSAGE_ALREADY_SMOOTH
from expr_io.parser import parse_poly
from expr_io.report import render_mapping
from utils.exceptions import MathError

logging.basicConfig(level=logging.INFO, format="%(levelname)s - %(message)s")
logger = logging.getLogger(__name__)

XY = ("x", "y")
XYZ = ("x", "y", "z")


def ideal(variables, *texts):
    return Ideal.of([parse_poly(text, variables) for text in texts], variables)


@pytest.fixture
def cusp():
    return ideal(XY, "x^2 - y^3")


class TestCharts:
    """Подстановки карт и действие μ_{w_i}."""

    def test_cusp_substitutions(self, cusp):
        """Карта 1: x = s³, y = s²·y; карта 2: x = x·s³, y = s²."""
        centre, _ = associated_centre_m2(cusp)
        first = chart_substitution(centre, 1)
        second = chart_substitution(centre, 2)
        assert first.chart_vars == ("s", "y")
        assert first.substitution() == {"x": "s^3", "y": "s^2*y"}
        assert first.stabilizer_order == 3
        assert second.chart_vars == ("x", "s")
        assert second.substitution() == {"x": "x*s^3", "y": "s^2"}
        assert second.stabilizer_order == 2
        with pytest.raises(MathError, match="outside"):
            chart_substitution(centre, 3)

    def test_exceptional_name_avoids_clash(self):
        """Если s занято, исключительная переменная - s1."""
        centre, _ = associated_centre_m2(ideal(("s", "y"), "s^2 - y^3"))
        assert chart_substitution(centre, 1).exceptional == "s1"

    def test_characters(self, cusp):
        """Собственный прообраз однороден относительно стабилизатора."""
        centre, _ = associated_centre_m2(cusp)
        chart = chart_substitution(centre, 1)
        assert chart_character(chart, (3, 0)) == 0
        assert chart_character(chart, (1, 0)) == 2
        assert chart_character(chart, (0, 1)) == 2
        result = blow_up(cusp)
        for chart, transform in result.charts:
            for g in transform.gens:
                assert len(transform_characters(chart, g.body)) == 1


class TestProperTransform:
    """Начальные формы и собственные прообразы."""

    def test_cusp_charts(self, cusp):
        """1 - y³ в карте 1 и x² - 1 в карте 2."""
        logger.info("=== Тест: раздутие каспы ===")
        result = blow_up(cusp)
        assert tuple(result.centre.invariant) == (2, 3)
        (first, first_ideal), (second, second_ideal) = result.charts
        assert [g.body for g in first_ideal.gens] == [parse_poly("1 - y^3", first.chart_vars)]
        assert [g.body for g in second_ideal.gens] == [parse_poly("x^2 - 1", second.chart_vars)]
        logger.info("✅ Тест пройден: раздутие каспы")

    def test_initial_form_drops_higher_terms(self):
        """in(x² - y³ + y⁴) = x² - y³."""
        curve = ideal(XY, "x^2 - y^3 + y^4")
        centre, _ = associated_centre_m2(curve)
        assert initial_form(curve.gens[0].body, centre) == parse_poly("x^2 - y^3", XY)

    @pytest.mark.parametrize("variables, text", [
        (XY, "x^2 - y^3 + y^4"),
        (XYZ, "x^2 - y^2*z - y^5"),
        (XY, "x^4 + x*y^4 + y^6"),
    ])
    def test_initialisation_invariance(self, variables, text):
        """Идеал начальных форм имеет тот же инвариант."""
        assert check_initialisation_invariance(ideal(variables, text))

    def test_zero_centre_is_rejected(self):
        """Нулевой центр не раздувается."""
        with pytest.raises(MathError, match="zero centre"):
            blow_up(ideal(XY, "x^2 - y^3"), centre=MarkedCentre.zero(XY))

class TestResolve:
    """Драйвер разрешения."""

    def test_cusp_resolves_in_one_step(self, cusp):
        """Одно раздутие, обе карты гладкие."""
        trace = resolve(cusp)
        assert trace.steps == 1
        assert trace.complete
        assert trace.root.invariant == (2, 3)
        assert all(child.smooth for child in trace.root.children)

    def test_whitney_umbrella(self):
        """Корень (2, 3, 3), в z-карте x² - y² с инвариантом (2, 2)."""
        logger.info("=== Тест: разрешение зонтика Уитни ===")
        trace = resolve(ideal(XYZ, "x^2 - y^2*z"))
        assert trace.root.invariant == (2, 3, 3)
        assert trace.steps == 2
        assert trace.complete
        children = trace.root.children
        assert len(children) == 3
        for child in children:
            if child.inspected:
                assert compare_inv(child.invariant, (2, 2)) <= 0
        assert any(child.invariant == (2, 2) for child in children)
        data = trace.as_mapping()
        assert data["message"] == "resolved at inspected points"
        logger.info("✅ Тест пройден: разрешение зонтика Уитни")

    def test_already_smooth(self):
        """Гладкий вход: ноль раздутий."""
        trace = resolve(ideal(XY, "x + y^2"))
        assert trace.steps == 0
        assert trace.message == MESSAGE_ALREADY_SMOOTH

    def test_max_steps(self):
        """Предел шагов прерывает разрешение."""
        trace = resolve(ideal(XYZ, "x^2 - y^2*z"), max_steps=1)
        assert not trace.complete
        assert trace.message == "max steps reached"
        with pytest.raises(MathError):
            resolve(ideal(XY, "x^2 - y^3"), max_steps=0)

    def test_inspection_points(self):
        """Начало координат первым, без повторов, размерность проверяется."""
        points = inspection_points(2, [(0, 0), (5, 7)])
        assert points[0] == (Fraction(0), Fraction(0))
        assert points[-1] == (Fraction(5), Fraction(7))
        assert len(points) == len(set(points))
        with pytest.raises(MathError, match="dimension"):
            inspection_points(2, [(1, 2, 3)])


class TestResolveDeterminism:
    """Повторный прогон дает побайтно тот же отчет."""

    @pytest.mark.parametrize("variables, text", [
        (XY, "x^2 - y^3"),
        (XYZ, "x^2 - y^2*z"),
        (XY, "x^2 - y^5"),
    ])
    @pytest.mark.parametrize("fmt", [FORMAT_JSON, FORMAT_TEXT])
    def test_identical_reports(self, variables, text, fmt):
        first = render_mapping(resolve(ideal(variables, text)).as_mapping(), fmt)
        second = render_mapping(resolve(ideal(variables, text)).as_mapping(), fmt)
        assert first.encode("utf-8") == second.encode("utf-8")

    def test_resolve_does_not_flood_warnings(self):
        """Проверки допустимости и углубление усечения не пишут предупреждений."""
        with patch("centres.method_two.logger") as m2_log, patch("centres.method_one.logger") as m1_log:
            resolve(ideal(XYZ, "x^2 - y^2*z"))
        m2_log.warning.assert_not_called()
        m1_log.warning.assert_not_called()
