"""
Тесты базового алгоритма с коэффициентными идеалами.
"""
import logging
from fractions import Fraction
from math import factorial

import pytest

from algebra.ideal import Ideal, WorkCounter
from baseline.atw import atw_centre, coefficient_ideal
from centres.method_two import associated_centre_m2
from config.constants import ATW_MODE_FULL, ATW_MODE_ORDER_ONLY
from expr_io.parser import parse_poly
from expr_io.report import format_big_integer
from utils.exceptions import ExponentOverflow, MathError

logging.basicConfig(level=logging.INFO, format="%(levelname)s - %(message)s")
logger = logging.getLogger(__name__)

XY = ("x", "y")
XYZ = ("x", "y", "z")


def ideal(variables, *texts):
    return Ideal.of([parse_poly(text, variables) for text in texts], variables)


class TestComparisonExample:
    """x⁴ + y⁵ + z⁶: факториальный рост порядков."""

    def test_order_only_sequence(self):
        """b = (4, 30, 36·29!), a = (4, 5, 6)."""
        logger.info("=== Тест: ATW на x^4 + y^5 + z^6 ===")
        counter = WorkCounter()
        result = atw_centre(ideal(XYZ, "x^4 + y^5 + z^6"), counter=counter)
        assert result.b == (4, 30, 36 * factorial(29))
        assert [format_big_integer(b) for b in result.b] == [4, 30, "36*29!"]
        assert result.a == (Fraction(4), Fraction(5), Fraction(6))
        assert result.mode == ATW_MODE_ORDER_ONLY
        assert counter.as_dict()["exponent_sum"] > 0
        logger.info("✅ Тест пройден: ATW на x^4 + y^5 + z^6")

    def test_agrees_with_derivative_method(self):
        """Инвариант базового алгоритма совпадает с Методом 2 на примере."""
        surface = ideal(XYZ, "x^4 + y^5 + z^6")
        centre, _ = associated_centre_m2(surface)
        assert tuple(centre.invariant) == atw_centre(surface).a

    def test_parameters_follow_witnesses(self):
        """Параметры уровней выбираются по мономиальным свидетелям x, y, z."""
        result = atw_centre(ideal(XYZ, "x^4 + y^5 + z^6"))
        assert [sorted(p.body.linear_part()) for p in result.centre.params] == [[0], [1], [2]]
        assert [entry["level"] for entry in result.trace] == [1, 2, 3]

    def test_full_mode_overflows(self):
        """Полная материализация отказывает на втором уровне."""
        with pytest.raises(ExponentOverflow, match="exponent overflow"):
            atw_centre(ideal(XYZ, "x^4 + y^5 + z^6"), mode=ATW_MODE_FULL)

    def test_exponent_sum_dominates_derivatives(self):
        """Сумма показателей на порядки больше числа производных Метода 2."""
        surface = ideal(XYZ, "x^4 + y^5 + z^6")
        derivatives = WorkCounter()
        associated_centre_m2(surface, counter=derivatives)
        exponents = WorkCounter()
        atw_centre(surface, counter=exponents)
        ratio = exponents.as_dict()["exponent_sum"] / derivatives.as_dict()["derivative_generators"]
        assert ratio >= 10


class TestSmallCases:
    """Малые примеры, где оба режима работают."""

    @pytest.mark.parametrize("mode", [ATW_MODE_ORDER_ONLY, ATW_MODE_FULL])
    def test_cusp(self, mode):
        """Каспа: b = (2, 3), a = (2, 3)."""
        result = atw_centre(ideal(XY, "x^2 - y^3"), mode=mode)
        assert result.b == (2, 3)
        assert result.a == (Fraction(2), Fraction(3))
        assert tuple(result.centre.invariant) == (2, 3)

    def test_smooth_curve(self):
        """Гладкая кривая: b = (1)."""
        result = atw_centre(ideal(XY, "x + y^2"))
        assert result.b == (1,)

    def test_coefficient_ideal_exponents(self):
        """C(I, 4): показатели 4!/(4 - i) для i < 4."""
        node = coefficient_ideal(ideal(XYZ, "x^4 + y^5 + z^6"), 4)
        assert node.exponents == (6, 8, 12, 24)
        assert node.exponent_sum == 50

    def test_invalid_arguments(self):
        """b < 1 и неизвестный режим."""
        surface = ideal(XY, "x^2 - y^3")
        with pytest.raises(MathError):
            coefficient_ideal(surface, 0)
        with pytest.raises(MathError, match="unknown coefficient ideal mode"):
            atw_centre(surface, mode="lazy")
