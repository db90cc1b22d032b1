"""
Тесты многочленов, усеченных рядов, замен координат и базисов Грёбнера.
"""
import logging
from fractions import Fraction

import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from algebra.groebner import buchberger, contains_locally, guard_limits, is_unit_ideal, normal_form
from algebra.ideal import Ideal, WorkCounter, derive_ideal, restrict_to_coordinate_slice
from algebra.polynomial import Polynomial, iterated_derivative, monomial_support, partial_derivative, translate_to_origin
from algebra.series import CoordinateFrame, TruncatedSeries, invert_etale_change, substitute
from utils.exceptions import GuardExceeded, MathError

logging.basicConfig(level=logging.INFO, format="%(levelname)s - %(message)s")
logger = logging.getLogger(__name__)

XY = ("x", "y")
XYZ = ("x", "y", "z")


def var(name, variables=XY):
    return Polynomial.variable(variables, name)


terms = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)),
    st.integers(-5, 5),
    max_size=4,
)


def poly_of(data):
    return Polynomial.from_terms(XY, data)


class TestPolynomial:
    """Арифметика и дифференцирование многочленов."""

    def test_module_level_operations(self):
        """Производные, сдвиг и носитель на примерах из вычислений центров."""
        xy, xyz = ("x", "y"), ("x", "y", "z")
        cusp = Polynomial.from_terms(xy, {(2, 0): 1, (0, 3): -1})
        assert partial_derivative(cusp, 0) == Polynomial.from_terms(xy, {(1, 0): 2})
        assert iterated_derivative(cusp, (0, 2)) == Polynomial.from_terms(xy, {(0, 1): -6})
        assert iterated_derivative(cusp, (0, 0)) == cusp
        newton = Polynomial.from_terms(xy, {(4, 0): 1, (1, 4): 1, (0, 6): 1})
        assert iterated_derivative(newton, (0, 2)) == Polynomial.from_terms(xy, {(1, 2): 12, (0, 4): 30})
        assert monomial_support(newton) == {(4, 0), (1, 4), (0, 6)}
        assert monomial_support(Polynomial.zero(xy)) == set()
        umbrella = Polynomial.from_terms(xyz, {(2, 0, 0): 1, (0, 2, 1): -1})
        shifted = Polynomial.from_terms(xyz, {(2, 0, 0): 1, (0, 2, 1): -1, (0, 2, 0): -1})
        assert translate_to_origin(umbrella, (0, 0, 1)) == shifted
        assert translate_to_origin(umbrella, (0, 0, 0)) == umbrella

    def test_arithmetic_and_degree(self):
        """Сложение, умножение, степень и порядок."""
        logger.info("=== Тест: арифметика многочленов ===")
        x, y = var("x"), var("y")
        f = x ** 2 - y ** 3
        assert f.degree() == 3
        assert f.order() == 2
        assert (f + y ** 3) == x ** 2
        assert (x + 1) * (x - 1) == x ** 2 - 1
        assert Polynomial.zero(XY).degree() == -1
        assert f.coefficient((0, 3)) == Fraction(-1)
        logger.info("✅ Тест пройден: арифметика многочленов")

    def test_variable_mismatch(self):
        """Многочлены от разных переменных не складываются."""
        with pytest.raises(MathError):
            _ = var("x") + Polynomial.variable(XYZ, "x")

    def test_derivative_and_translate(self):
        """∂^β и сдвиг в начало координат."""
        x, y = var("x"), var("y")
        f = x ** 3 * y ** 2
        assert f.derivative((2, 1)) == (x * y).scale(12)
        assert f.derivative((4, 0)).is_zero
        g = x ** 2 - y
        assert g.translate((1, 1)) == x ** 2 + x.scale(2) - y

    def test_compose(self):
        """Подстановка образов переменных."""
        x, y = var("x"), var("y")
        f = x ** 2 - y ** 3
        images = {"x": x * y, "y": y}
        assert f.compose(images, XY) == x ** 2 * y ** 2 - y ** 3

    def test_str(self):
        """Печать в нотации парсера."""
        x = var("x")
        assert str(x ** 2 - 1) == "x^2 - 1"
        assert str(Polynomial.zero(XY)) == "0"

    @hypothesis_settings(max_examples=60, deadline=None)
    @given(terms, terms)
    def test_leibniz_rule(self, first, second):
        """∂(fg) = ∂f·g + f·∂g."""
        f, g = poly_of(first), poly_of(second)
        for index in range(2):
            assert (f * g).diff(index) == f.diff(index) * g + f * g.diff(index)

    @hypothesis_settings(max_examples=60, deadline=None)
    @given(terms, st.tuples(st.integers(-3, 3), st.integers(-3, 3)), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
    def test_translation_law(self, data, p, q):
        """(f∘τ_p)(q) = f(p + q)."""
        f = poly_of(data)
        shifted = tuple(a + b for a, b in zip(p, q))
        assert f.translate(p).evaluate(q) == f.evaluate(shifted)


class TestTruncatedSeries:
    """Усеченные ряды и обращение этальной замены."""

    def test_truncation_drops_high_terms(self):
        """Термы выше порядка усечения отбрасываются, порядок сертифицируется телом."""
        x, y = var("x"), var("y")
        series = TruncatedSeries(x ** 2 + y ** 5, 3)
        assert series.body == x ** 2
        assert series.order() == (2, True)
        tail_only = TruncatedSeries(y ** 5, 3)
        assert tail_only.order() == (None, False)
        assert tail_only.order_lower_bound() == 4

    def test_exact_arithmetic_stays_exact(self):
        """Точные ряды остаются точными."""
        x = var("x")
        product = TruncatedSeries.exact_of(x) * TruncatedSeries.exact_of(x ** 7)
        assert product.exact
        assert product.body == x ** 8

    def test_invert_polynomial_change(self):
        """x -> x + y² обращается точно."""
        x, y = var("x"), var("y")
        mapping = invert_etale_change(XY, "x", x + y ** 2, 4)
        assert mapping.exact
        assert mapping["x"].body == x - y ** 2

    def test_invert_series_change(self):
        """x -> x + x² обращается рядом с каталановыми коэффициентами."""
        logger.info("=== Тест: обращение x + x^2 ===")
        x = var("x")
        mapping = invert_etale_change(XY, "x", x + x ** 2, 5)
        assert not mapping.exact
        expected = x - x ** 2 + (x ** 3).scale(2) - (x ** 4).scale(5) + (x ** 5).scale(14)
        assert mapping["x"].body == expected
        composed = substitute(x + x ** 2, mapping)
        assert composed.body == x
        assert composed.trunc_order == 5
        logger.info("✅ Тест пройден: обращение x + x^2")

    def test_not_a_parameter(self):
        """Замена без линейной части отклоняется."""
        x, y = var("x"), var("y")
        with pytest.raises(MathError, match="not a parameter at p"):
            invert_etale_change(XY, "x", y ** 2, 3)

    def test_frame_from_parameters(self):
        """Параметр x + y² становится первой координатой."""
        x, y = var("x"), var("y")
        frame = CoordinateFrame.from_parameters(XY, [x + y ** 2], 4)
        assert frame.exact
        assert frame.express(x + y ** 2).body == x
        assert frame.express(x ** 2 - y ** 3).body == (x - y ** 2) ** 2 - y ** 3


class TestIdealOperations:
    """Идеалы производных, ограничения и базисы Грёбнера."""

    def test_derive_ideal_counts_generators(self):
        """D^{≤1}(x² - y³) = (x, y²) и два новых генератора."""
        x, y = var("x"), var("y")
        counter = WorkCounter()
        derived = derive_ideal(Ideal.of([x ** 2 - y ** 3], XY), 1, counter)
        assert {g.body for g in derived.gens} == {x, y ** 2}
        assert counter.as_dict() == {"derivative_generators": 2}

    def test_restrict_to_slice(self):
        """Ограничение на V(x)."""
        x, y = var("x"), var("y")
        restricted = restrict_to_coordinate_slice(Ideal.of([x ** 2 - y ** 3], XY), ["x"])
        assert [g.body for g in restricted.gens] == [y ** 3]
        with pytest.raises(MathError, match="change coordinates first"):
            restrict_to_coordinate_slice(Ideal.of([x], XY), [x + y])

    def test_order_at_origin(self):
        """ord_0 идеала и проверка обращения в ноль."""
        x, y = var("x"), var("y")
        ideal = Ideal.of([x ** 2 - y ** 3, x * y], XY)
        assert ideal.order_at_origin() == (2, True)
        assert ideal.vanishes_at((0, 0))
        assert not ideal.vanishes_at((1, 0))

    def test_groebner_unit_and_normal_form(self):
        """Единичный идеал и остаток деления."""
        x, y = var("x"), var("y")
        assert is_unit_ideal([x, x - 1])
        basis = buchberger([x ** 2 - y, x * y - 1])
        assert not basis.is_unit
        assert normal_form(x ** 2 - y, basis).is_zero

    def test_local_membership(self):
        """x ∈ (x(1 + y)) локально, x ∉ (x²)."""
        x, y = var("x"), var("y")
        assert contains_locally([x * (1 + y)], x)
        assert not contains_locally([x ** 2], x)

    def test_guard(self, monkeypatch):
        """Слишком большие задачи отклоняются."""
        from config.settings import settings
        monkeypatch.setattr(settings, "GUARD_MAX_DEGREE", 3)
        x, y = var("x"), var("y")
        with pytest.raises(GuardExceeded, match="too large"):
            buchberger([x ** 5 - y, x * y])

    def test_guard_limits_scope(self):
        """guard_limits ужесточает предел только внутри блока."""
        x, y = var("x"), var("y")
        with guard_limits(3):
            with pytest.raises(GuardExceeded):
                buchberger([x ** 5 - y, x * y])
        basis = buchberger([x ** 5 - y, x * y])
        assert buchberger([x ** 5 - y, x * y]).generators == basis.generators
