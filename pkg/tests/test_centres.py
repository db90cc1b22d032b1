"""
Тесты ассоциированных центров: Метод 1 (Ξ по множеству Ньютона) и Метод 2 (идеалы D[β]).
"""
import logging
from fractions import Fraction

import pytest
from hypothesis import given, reject, settings as hypothesis_settings, strategies as st

from algebra.ideal import Ideal, WorkCounter
from centres.invariants import gamma_member
from centres.method_one import associated_centre_m1, bcompletion_oracle, start_state, step
from centres.method_two import associated_centre_m2, d_bracket
from centres.weighting import compatible_check, is_admissible
from cli.validation import small_ideals
from config.settings import settings
from expr_io.parser import parse_poly
from strata.global_strat import invariant_at_point
from utils.exceptions import GuardExceeded, MathError, TruncationError

logging.basicConfig(level=logging.INFO, format="%(levelname)s - %(message)s")
logger = logging.getLogger(__name__)

F = Fraction
XY = ("x", "y")
XYZ = ("x", "y", "z")
RUNNERS = [associated_centre_m1, associated_centre_m2]


def ideal(variables, *texts):
    return Ideal.of([parse_poly(text, variables) for text in texts], variables)


class TestAmFamily:
    """A_m: x² - y^{m+1}."""

    @pytest.mark.parametrize("m", range(1, 7))
    def test_invariant_and_weights(self, m):
        """Инвариант (2, m+1), веса (m+1, 2) или ((m+1)/2, 1)."""
        logger.info(f"=== Тест: A_{m} ===")
        curve = ideal(XY, f"x^2 - y^{m + 1}")
        expected_weights = (m + 1, 2) if m % 2 == 0 else ((m + 1) // 2, 1)
        results = [runner(curve)[0] for runner in RUNNERS]
        for centre in results:
            assert tuple(centre.invariant) == (2, m + 1)
            assert centre.weights == expected_weights
        assert results[0].invariant == results[1].invariant
        logger.info(f"✅ Тест пройден: A_{m}")


class TestWhitneyUmbrella:
    """x² - y²z."""

    @pytest.fixture
    def umbrella(self):
        return ideal(XYZ, "x^2 - y^2*z")

    @pytest.mark.parametrize("runner", RUNNERS)
    def test_origin(self, umbrella, runner):
        """(2, 3, 3), веса (3, 2, 2), маркировка 6."""
        centre, trace = runner(umbrella)
        assert tuple(centre.invariant) == (2, 3, 3)
        assert centre.weights == (3, 2, 2)
        assert centre.marking == 6
        assert len(trace) == 3
        assert [record["step"] for record in trace] == [1, 2, 3]

    def test_parameters_equivalent_to_coordinates(self, umbrella):
        """Параметры центра совместимы с (x, y, z) и наоборот."""
        centre, _ = associated_centre_m2(umbrella)
        coordinates = [parse_poly(name, XYZ) for name in XYZ]
        assert compatible_check(centre, coordinates)
        assert compatible_check(centre, [p.body for p in centre.params])
        assert is_admissible(centre, umbrella)

    def test_other_points(self, umbrella):
        """(2, 2) на оси z, (1) в гладкой точке."""
        assert invariant_at_point(umbrella, (0, 0, 1)) == (2, 2)
        assert invariant_at_point(umbrella, (0, 0, -2)) == (2, 2)
        assert invariant_at_point(umbrella, (1, 1, 1)) == (1,)

    def test_point_off_variety(self, umbrella):
        """Точка вне V(I) - ошибка."""
        with pytest.raises(MathError, match="point not on the variety"):
            associated_centre_m2(umbrella, (1, 0, 0))


class TestNewtonCurve:
    """x⁴ + xy⁴ + y⁶: нецелый инвариант."""

    @pytest.mark.parametrize("runner", RUNNERS)
    def test_invariant(self, runner):
        """(4, 16/3), маркировка 16, веса (4, 3)."""
        centre, _ = runner(ideal(XY, "x^4 + x*y^4 + y^6"))
        assert tuple(centre.invariant) == (F(4), F(16, 3))
        assert centre.marking == 16
        assert centre.weights == (4, 3)
        assert gamma_member(centre.invariant)


class TestSmallIdeals:
    """Гладкие и нормальные пересечения."""

    @pytest.mark.parametrize("texts, expected", [
        (("x",), (1,)),
        (("x", "y"), (1, 1)),
        (("x*y",), (2, 2)),
        (("x^2 - y^3",), (2, 3)),
    ])
    def test_methods_agree(self, texts, expected):
        """Оба метода дают один и тот же инвариант."""
        curve = ideal(XY, *texts)
        first, _ = associated_centre_m1(curve)
        second, _ = associated_centre_m2(curve)
        assert tuple(first.invariant) == expected
        assert tuple(second.invariant) == expected

    def test_translated_point(self):
        """Центр в точке (1, 0) для (x - 1)² - y³."""
        centre, _ = associated_centre_m2(ideal(XY, "(x - 1)^2 - y^3"), (1, 0))
        assert tuple(centre.invariant) == (2, 3)
        assert centre.base_point == (1, 0)
        assert centre.user_parameters()[0] == "x - 1"

    def test_zero_ideal(self):
        """Нулевой идеал не имеет центра."""
        with pytest.raises(MathError, match="zero ideal"):
            associated_centre_m2(ideal(XY, "0"))

    def test_derivative_counter(self):
        """Метод 2 считает порожденные производные."""
        counter = WorkCounter()
        associated_centre_m2(ideal(XYZ, "x^4 + y^5 + z^6"), counter=counter)
        assert counter.as_dict()["derivative_generators"] > 0

    def test_d_bracket_of_cusp(self):
        """D[(1)] каспы содержит x: элемент максимального контакта."""
        bracket = d_bracket(ideal(XY, "x^2 - y^3"), (1,))
        assert parse_poly("x", XY) in {g.body for g in bracket.gens}


class TestCompletionOracle:
    """a_{j+1} = max{b : b-пополнение допустимо} после первого шага Метода 1."""

    @pytest.mark.parametrize("variables, text, expected", [
        (XY, "x^2 - y^3", F(3)),
        (XY, "x^2 - y^5", F(5)),
        (XYZ, "x^2 - y^2*z", F(3)),
        (XY, "x^4 + x*y^4 + y^6", F(16, 3)),
    ])
    def test_second_entry(self, variables, text, expected):
        state = step(start_state(ideal(variables, text)))
        assert len(state.invariant) == 1
        assert bcompletion_oracle(state) == expected


class TestUnitScaling:
    """Инвариант Метода 1 не зависит от умножения генераторов на единицы."""

    @pytest.mark.parametrize("variables, text", [
        (XY, "x^2 - y^3"),
        (XYZ, "x^2 - y^2*z"),
        (XY, "x^4 + x*y^4 + y^6"),
    ])
    @pytest.mark.parametrize("unit", ["-2", "1/3", "1 + x", "2 - y + x*y"])
    def test_worked_examples(self, variables, text, unit):
        expected, _ = associated_centre_m1(ideal(variables, text))
        scaled, _ = associated_centre_m1(ideal(variables, f"({unit})*({text})"))
        assert scaled.invariant == expected.invariant

    @hypothesis_settings(max_examples=20, deadline=None)
    @given(small_ideals(max_vars=2), st.sampled_from([Fraction(-1), Fraction(3), Fraction(2, 5)]))
    def test_fuzzed_ideals(self, gens, c):
        try:
            expected, _ = associated_centre_m1(Ideal.of(list(gens)), trunc_cap=settings.VALIDATE_TRUNC_CAP)
            scaled, _ = associated_centre_m1(Ideal.of([g.scale(c) for g in gens]),
                                             trunc_cap=settings.VALIDATE_TRUNC_CAP)
        except (TruncationError, GuardExceeded):
            reject()
        assert scaled.invariant == expected.invariant
