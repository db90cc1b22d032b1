"""
File: expr_io/newton_svg.py
Purpose:
    SVG-рисунок множества Ньютона плоской кривой с гиперплоскостями H(a₁), H(a₁,a₂).

Responsibilities:
    - newton_svg: точки минимальных элементов и отрезки с пересечениями (a₁, a_j) на осях

Key Design Decisions:
    - matplotlib с backend Agg, без pyplot (нет глобального состояния фигур)
    - Вывод детерминирован: svg.hashsalt фиксирован, метаданные Date отключены
    - Элементы помечены gid ("dot-a-b", "hyperplane-j"), чтобы тесты находили их в SVG

Notes:
    - Только n = 2
"""
from fractions import Fraction
from pathlib import Path
from typing import Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")

from matplotlib import rc_context  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from centres.newton_graph import NewtonSet  # noqa: E402
from config.constants import SVG_DOT_ID, SVG_HASH_SALT, SVG_SEGMENT_ID  # noqa: E402
from utils.exceptions import MathError  # noqa: E402
from utils.logger import logger  # noqa: E402


def _label(value: Fraction) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def newton_svg(newton: Union[NewtonSet, Sequence[Tuple[int, int]]], preinv: Sequence[Fraction],
               path: Union[str, Path], variables: Sequence[str] = ("x", "y")) -> Path:
    """
    Нарисовать множество Ньютона и отрезки H(a₁..a_j).

    Args:
        newton: Множество Ньютона или его минимальные элементы
        preinv: Инвариант (a₁, a₂) или его префикс
        path: Куда записать SVG
        variables: Подписи осей

    Returns:
        Путь к записанному файлу

    Raises:
        MathError: "plot supports plane curves only" при n != 2
    """
    elements = newton.minimal_elements if isinstance(newton, NewtonSet) else tuple(tuple(b) for b in newton)
    if any(len(beta) != 2 for beta in elements) or len(variables) != 2 or len(preinv) > 2:
        raise MathError("plot supports plane curves only")
    preinv = [Fraction(a) for a in preinv]
    path = Path(path)

    with rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "none"}):
        figure = Figure(figsize=(4, 4))
        axes = figure.add_subplot(1, 1, 1)

        for a, b in elements:
            axes.plot([a], [b], "o", color="black", gid=SVG_DOT_ID.format(a, b))

        ticks_x, ticks_y = {0}, {0}
        for j, entry in enumerate(preinv, start=1):
            first = preinv[0]
            axes.plot([float(first), 0], [0, float(entry)], "-", color=f"C{j - 1}",
                      gid=SVG_SEGMENT_ID.format(j), label=f"H({', '.join(_label(x) for x in preinv[:j])})")
            ticks_x.add(first)
            ticks_y.add(entry)

        limit = float(max([max(map(max, elements), default=1)] + preinv)) + 1
        axes.set_xlim(-0.5, limit)
        axes.set_ylim(-0.5, limit)
        axes.set_xticks([float(t) for t in sorted(ticks_x)], [_label(t) for t in sorted(ticks_x)])
        axes.set_yticks([float(t) for t in sorted(ticks_y)], [_label(t) for t in sorted(ticks_y)])
        axes.set_xlabel(f"β₁ ({variables[0]}), a₁")
        axes.set_ylabel(f"β₂ ({variables[1]}), a₂")
        axes.grid(True, linestyle=":", linewidth=0.5)
        if preinv:
            axes.legend(loc="upper right")

        path.parent.mkdir(parents=True, exist_ok=True)
        figure.savefig(path, format="svg", metadata={"Date": None})

    logger.info(f"SVG множества Ньютона записан: {path}")
    return path
