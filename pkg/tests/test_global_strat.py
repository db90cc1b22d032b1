"""
Тесты глобального максимального инварианта через базисы Грёбнера.
"""
import logging
from dataclasses import replace
from fractions import Fraction

import pytest

from algebra.groebner import is_unit_ideal
from algebra.ideal import Ideal
from algebra.polynomial import Polynomial
from expr_io.parser import parse_poly
from strata.global_strat import GlobalState, global_max_invariant, max_order, next_entry_global, stratum_ideal
from utils.exceptions import GuardExceeded, MathError

logging.basicConfig(level=logging.INFO, format="%(levelname)s - %(message)s")
logger = logging.getLogger(__name__)

XY = ("x", "y")
XYZ = ("x", "y", "z")


def ideal(variables, *texts):
    return Ideal.of([parse_poly(text, variables) for text in texts], variables)


class TestMaxOrder:
    """max_p ord_p I."""

    @pytest.mark.parametrize("variables, text, expected", [
        (XY, "x", 1),
        (XY, "x^2 - y^3", 2),
        (XYZ, "x^2 - y^2*z", 2),
        (XYZ, "x^4 + y^5 + z^6", 4),
        (XY, "x^2 + 1", 1),
        (XY, "1", 0),
    ])
    def test_values(self, variables, text, expected):
        assert max_order(ideal(variables, text)) == expected

    def test_zero_ideal(self):
        assert max_order(ideal(XY, "0")) is None


class TestGlobalInvariant:
    """Максимум по всем точкам."""

    def test_whitney_umbrella(self):
        """Максимум (2, 3, 3) достигается в начале координат."""
        logger.info("=== Тест: глобальный инвариант зонтика ===")
        result = global_max_invariant(ideal(XYZ, "x^2 - y^2*z"))
        assert result.invariant == (2, 3, 3)
        assert len(result.parameters) == 3
        assert [record["step"] for record in result.trace] == [1, 2, 3]
        logger.info("✅ Тест пройден: глобальный инвариант зонтика")

    def test_translated_cusp(self):
        """Особая точка вне начала координат."""
        result = global_max_invariant(ideal(XY, "(x - 1)^2 - y^3"))
        assert result.invariant == (2, 3)
        assert str(result.parameters[0]) == "x - 1"

    def test_errors(self, monkeypatch):
        """Нет нулей, нулевой идеал, слишком большая задача."""
        with pytest.raises(MathError, match="no zeros"):
            global_max_invariant(ideal(XY, "x", "x + 1"))
        with pytest.raises(MathError, match="zero ideal"):
            global_max_invariant(ideal(XY, "0"))
        from config.settings import settings
        monkeypatch.setattr(settings, "GUARD_MAX_VARS", 1)
        with pytest.raises(GuardExceeded):
            global_max_invariant(ideal(XY, "x^2 - y^3"))


class TestStratumIdeals:
    """A(a₁; b) на V(x₁) становится единичным сразу после следующего элемента инварианта."""

    @pytest.mark.parametrize("text, first, flip", [
        ("x^2 - y^2*z", 2, 3),
        ("x^4 + y^5 + z^6", 4, 5),
    ])
    def test_flip(self, text, first, flip):
        state = GlobalState.start(ideal(XYZ, text))
        x = Polynomial.variable(XYZ, "x")
        state = replace(state.adopt(x), invariant=(Fraction(first),))
        at_flip = stratum_ideal(state, flip).polynomials() + [x]
        above = stratum_ideal(state, Fraction(2 * flip + 1, 2)).polynomials() + [x]
        assert not is_unit_ideal(at_flip)
        assert is_unit_ideal(above)
        inclusive = stratum_ideal(state, flip, inclusive=True).polynomials() + [x]
        assert is_unit_ideal(inclusive)

    def test_next_entry_uses_strata(self):
        """next_entry_global находит переворот той же страты."""
        state = GlobalState.start(ideal(XYZ, "x^2 - y^2*z"))
        x = Polynomial.variable(XYZ, "x")
        state = replace(state.adopt(x), invariant=(Fraction(2),))
        value, contact = next_entry_global(state)
        assert value == 3
        assert contact.degree() == 1
