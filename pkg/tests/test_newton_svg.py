"""
Тесты SVG-рисунка множества Ньютона.
"""
from fractions import Fraction

import pytest

from algebra.polynomial import Polynomial
from centres.newton_graph import newton_set
from expr_io.newton_svg import newton_svg
from utils.exceptions import MathError

XY = ("x", "y")


@pytest.fixture
def newton_curve():
    x, y = Polynomial.variable(XY, "x"), Polynomial.variable(XY, "y")
    return newton_set([x ** 4 + x * y ** 4 + y ** 6])


class TestNewtonSvg:
    """Точки минимальных элементов и отрезки гиперплоскостей."""

    def test_elements_are_labelled(self, newton_curve, tmp_path):
        """Каждая точка и каждый отрезок имеют gid."""
        path = newton_svg(newton_curve, (Fraction(4), Fraction(16, 3)), tmp_path / "newton.svg")
        text = path.read_text(encoding="utf-8")
        for gid in ("dot-4-0", "dot-1-4", "dot-0-6", "hyperplane-1", "hyperplane-2"):
            assert f'id="{gid}"' in text
        assert "16/3" in text

    def test_output_is_deterministic(self, newton_curve, tmp_path):
        """Два запуска дают один и тот же файл."""
        first = newton_svg(newton_curve, (4, Fraction(16, 3)), tmp_path / "a.svg").read_bytes()
        second = newton_svg(newton_curve, (4, Fraction(16, 3)), tmp_path / "b.svg").read_bytes()
        assert first == second

    def test_plane_curves_only(self, tmp_path):
        """Для n != 2 рисунок не строится."""
        with pytest.raises(MathError, match="plane curves only"):
            newton_svg([(1, 0, 0)], (1,), tmp_path / "c.svg", ("x", "y", "z"))
