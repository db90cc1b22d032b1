"""
Тесты маркированных центров: фильтрации, нормирования, допустимость, совместимость.
"""
import logging
from fractions import Fraction

import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from algebra.polynomial import Polynomial
from centres.invariants import INFINITY
from centres.newton_graph import hyperplane_below, min_xi_over_newton, newton_set
from centres.weighting import (
    MarkedCentre,
    admissible_by_membership,
    b_completion,
    compatible_check,
    filtration_exponents,
    filtration_piece,
    is_admissible,
    valuation,
    weighted_order,
)
from cli.validation import (
    VARIABLES,
    check_valuation,
    invariant_of_weights,
    polynomials,
    valuation_samples,
    weight_vectors,
)
from utils.exceptions import MathError

logging.basicConfig(level=logging.INFO, format="%(levelname)s - %(message)s")
logger = logging.getLogger(__name__)

XY = ("x", "y")


@pytest.fixture
def xy():
    return Polynomial.variable(XY, "x"), Polynomial.variable(XY, "y")


@pytest.fixture
def cusp_centre(xy):
    x, y = xy
    return MarkedCentre.build(XY, [x, y], (2, 3))


class TestCuspWeighting:
    """Взвешивание (3, 2), связанное с каспой."""

    def test_marking_and_weights(self, cusp_centre):
        """Центр (x², y³): d = 6, w = (3, 2)."""
        assert cusp_centre.marking == 6
        assert cusp_centre.weights == (3, 2)

    def test_filtration_pieces(self, cusp_centre, xy):
        """ℱ_0..ℱ_6 для весов (3, 2)."""
        logger.info("=== Тест: фильтрация каспы ===")
        x, y = xy
        expected = {
            0: {Polynomial.constant(XY, 1)},
            1: {x, y},
            2: {x, y},
            3: {x, y ** 2},
            4: {x ** 2, x * y, y ** 2},
            5: {x ** 2, x * y, y ** 3},
            6: {x ** 2, x * y ** 2, y ** 3},
        }
        for level, generators in expected.items():
            assert set(filtration_piece(cusp_centre, level)) == generators, level
        assert filtration_exponents((3, 2), 6) == [(2, 0), (1, 2), (0, 3)]
        logger.info("✅ Тест пройден: фильтрация каспы")

    def test_compatible_parameters(self, cusp_centre, xy):
        """(x + y², x³ + y) совместимы, (y, x) - нет."""
        x, y = xy
        assert compatible_check(cusp_centre, [x + y ** 2, x ** 3 + y])
        assert not compatible_check(cusp_centre, [y, x])
        assert not compatible_check(cusp_centre, [x])

    def test_valuation_of_cusp(self, cusp_centre, xy):
        """v_ℱ(x² - y³) = 6, v_𝒥 = 1."""
        x, y = xy
        f = x ** 2 - y ** 3
        assert weighted_order(cusp_centre, f) == (Fraction(6), True)
        assert valuation(cusp_centre, f) == (Fraction(1), True)
        assert valuation(cusp_centre, Polynomial.zero(XY)).value is INFINITY

    def test_admissibility(self, xy):
        """(x², y³) допустим для каспы, (x², y⁴) - нет."""
        x, y = xy
        cusp = [x ** 2 - y ** 3]
        assert is_admissible(MarkedCentre.build(XY, [x, y], (2, 3)), cusp)
        assert not is_admissible(MarkedCentre.build(XY, [x, y], (2, 4)), cusp)

    def test_b_completion(self, xy):
        """Пополнение (x²) значением 3 дает (x², y³)."""
        x, _ = xy
        partial = MarkedCentre.build(XY, [x], (2,))
        completed = b_completion(partial, 3)
        assert tuple(completed.invariant) == (2, 3)
        with pytest.raises(MathError):
            b_completion(partial, 1)

    def test_parameters_must_vanish(self, xy):
        """Параметр с ненулевым значением в точке отклоняется."""
        x, _ = xy
        with pytest.raises(MathError, match="vanish"):
            MarkedCentre.build(XY, [x + 1], (2,))


class TestNewtonSet:
    """Множество Ньютона и минимум Ξ."""

    def test_newton_curve(self, xy):
        """x⁴ + xy⁴ + y⁶: минимальные элементы и Ξ = 16/3."""
        x, y = xy
        newton = newton_set([x ** 4 + x * y ** 4 + y ** 6])
        assert newton.minimal_elements == ((4, 0), (1, 4), (0, 6))
        assert newton.contains((2, 5))
        assert not newton.contains((0, 5))
        assert min_xi_over_newton((4,), newton) == (Fraction(16, 3), (1, 4))


class TestValuationAxioms:
    """v(fg) = v(f) + v(g), v(f + g) >= min."""

    @hypothesis_settings(max_examples=60, deadline=None)
    @given(valuation_samples())
    def test_axioms(self, sample):
        assert check_valuation(sample)


@st.composite
def coordinate_centres(draw):
    """Центр (x^{a_1}, ...) в координатных параметрах и 1-2 многочлена в (x, y, z)."""
    invariant = invariant_of_weights(draw(weight_vectors(max_weight=3)))
    params = [Polynomial.variable(VARIABLES, i) for i in range(len(invariant))]
    centre = MarkedCentre.build(VARIABLES, params, invariant)
    gens = draw(st.lists(polynomials(len(VARIABLES), max_degree=4), min_size=1, max_size=2))
    return centre, gens


class TestAdmissibilityAgreement:
    """Гиперплоскость под множеством Ньютона, is_admissible и принадлежность ℱ_d."""

    @hypothesis_settings(max_examples=40, deadline=None)
    @given(coordinate_centres())
    def test_three_criteria_agree(self, sample):
        centre, gens = sample
        below = hyperplane_below(centre.invariant, newton_set(gens))
        assert is_admissible(centre, gens) == below
        assert admissible_by_membership(centre, gens) == below

    @hypothesis_settings(max_examples=40, deadline=None)
    @given(coordinate_centres(), st.sampled_from([Fraction(-2), Fraction(1, 3), Fraction(5)]))
    def test_unit_scaling(self, sample, c):
        """Умножение генераторов на константу и на 1 + x не меняет v и допустимость."""
        centre, gens = sample
        unit = 1 + Polynomial.variable(VARIABLES, 0)
        scaled = [g.scale(c) for g in gens]
        twisted = [unit * g for g in gens]
        expected = is_admissible(centre, gens)
        assert is_admissible(centre, scaled) == expected
        assert is_admissible(centre, twisted) == expected
        for g, s, t in zip(gens, scaled, twisted):
            value = valuation(centre, g)
            assert valuation(centre, s) == value
            assert valuation(centre, t).value == value.value


class TestFiltrationNesting:
    """ℱ_{l+1} ⊆ ℱ_l."""

    @hypothesis_settings(max_examples=50, deadline=None)
    @given(weight_vectors(), st.integers(0, 8))
    def test_exponents_nested(self, weights, level):
        lower = filtration_exponents(weights, level)
        for beta in filtration_exponents(weights, level + 1):
            assert any(all(g <= b for g, b in zip(gamma, beta)) for gamma in lower)

    @hypothesis_settings(max_examples=30, deadline=None)
    @given(weight_vectors(), st.integers(1, 6))
    def test_pieces_nested(self, weights, level):
        """Генераторы ℱ_{l+1} имеют взвешенный порядок >= l + 1 > l."""
        invariant = invariant_of_weights(weights)
        params = [Polynomial.variable(VARIABLES, i) for i in range(len(invariant))]
        centre = MarkedCentre.build(VARIABLES, params, invariant)
        for generator in filtration_piece(centre, level + 1):
            assert weighted_order(centre, generator).value >= level + 1
        assert filtration_piece(centre, 0) == [Polynomial.constant(VARIABLES, 1)]
