"""
File: blowup/engine.py
Purpose:
    Взвешенные раздутия по картам: подстановки, собственные прообразы, начальные формы,
    проверка убывания инварианта и ограниченный по шагам драйвер разрешения.

Responsibilities:
    - chart_substitution: карта i взвешенного раздутия в центре (x_j -> s^{w_j}·x̃_j, x_i -> s^{w_i})
    - proper_transform: деление на точную степень s^{v_ℱ(g)} с внутренними проверками
    - chart_character: характер μ_{w_i} на мономах карты
    - initial_form / check_initialisation_invariance
    - blow_up / resolve / ResolutionTrace.verify

Key Design Decisions:
    - Карта - обычная аффинная карта; стабилизатор μ_{w_i} хранится только как метаданные
    - Подстановка строится в совместимых координатах центра (CoordinateFrame), поэтому
      для раздутия нужна точная (полиномиальная) система координат
    - maxinv узла - максимум по проверяемым точкам (начало карты, сетка GRID_VALUES^n,
      точки пользователя в корне); глобальные страты подтверждают его, если вычислимы
    - Нарушение строгого убывания - жесткая ошибка (InvariantViolation)

Notes:
    - Имя исключительной переменной: первое свободное из s, s1, s2, ...
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import chain, count, product
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple, Union

from algebra.ideal import Ideal
from algebra.polynomial import MultiIndex, Polynomial
from algebra.series import CoordinateFrame, TruncatedSeries
from centres.invariants import compare_inv, max_invariant
from centres.method_two import associated_centre_m2
from centres.weighting import MarkedCentre, initial_truncation
from config.constants import MESSAGE_ALREADY_SMOOTH, REGIME_POINTS, REGIME_STRATA
from config.settings import settings
from strata.global_strat import global_max_invariant
from utils.exceptions import GuardExceeded, InvariantViolation, MathError, TruncationError
from utils.logger import logger


# ============================================================================
# КАРТЫ
# ============================================================================

def _exceptional_name(variables: Sequence[str]) -> str:
    names = chain(["s"], (f"s{k}" for k in count(1)))
    return next(name for name in names if name not in variables)


def _exact_frame(centre: MarkedCentre) -> CoordinateFrame:
    frame = centre.local_frame(1)
    if not frame.exact:
        raise MathError("blow-up needs polynomial coordinates")
    return frame


@dataclass(frozen=True)
class ChartData:
    """
    Карта i взвешенного раздутия.

    Attributes:
        index: Номер карты i (1..k)
        centre: Центр раздутия
        frame: Совместимая система координат центра (позиции 0..k-1 - параметры)
        exceptional: Имя переменной s
        chart_vars: Переменные карты (координата на позиции i-1 заменена на s)
        images: Образы координат системы frame: u_j -> s^{w_j}·ũ_j, u_i -> s^{w_i}
        stabilizer_order: Порядок стабилизатора μ_{w_i}
    """

    index: int
    centre: MarkedCentre
    frame: CoordinateFrame = field(compare=False)
    exceptional: str
    chart_vars: Tuple[str, ...]
    images: Dict[str, Polynomial] = field(compare=False)
    stabilizer_order: int

    @property
    def slot(self) -> int:
        """Индекс переменной, замененной на s."""
        return self.frame.var_at(self.index - 1)

    def weight_of(self, var_index: int) -> int:
        """Вес координаты с индексом переменной var_index (0 для невзвешенных)."""
        position = self.frame.position_of(var_index)
        return self.centre.weights[position] if position < self.centre.length else 0

    def substitution(self) -> Dict[str, str]:
        return {name: str(image) for name, image in self.images.items()}

    def as_mapping(self) -> Dict[str, Any]:
        return {
            "chart": self.index,
            "vars": list(self.chart_vars),
            "exceptional": self.exceptional,
            "substitution": self.substitution(),
            "stabilizer_order": self.stabilizer_order,
        }


def chart_substitution(centre: MarkedCentre, index: int) -> ChartData:
    """
    Карта index (нумерация с 1) взвешенного раздутия в центре.

    Args:
        centre: Маркированный центр длины k >= 1
        index: 1 <= index <= k

    Returns:
        ChartData с подстановкой в совместимых координатах центра

    Raises:
        MathError: неверный индекс, нулевой центр или неполиномиальные координаты
    """
    if not 1 <= index <= centre.length:
        raise MathError(f"chart index {index} is outside 1..{centre.length}")
    frame = _exact_frame(centre)
    exceptional = _exceptional_name(frame.vars)
    slot = frame.var_at(index - 1)
    chart_vars = tuple(exceptional if i == slot else name for i, name in enumerate(frame.vars))

    s = Polynomial.variable(chart_vars, slot)
    images: Dict[str, Polynomial] = {}
    for position in range(frame.nvars):
        var = frame.var_at(position)
        coordinate = Polynomial.variable(chart_vars, var)
        if position == index - 1:
            images[frame.vars[var]] = s ** centre.weights[position]
        elif position < centre.length:
            images[frame.vars[var]] = s ** centre.weights[position] * coordinate
        else:
            images[frame.vars[var]] = coordinate
    return ChartData(index, centre, frame, exceptional, chart_vars, images, centre.weights[index - 1])


def chart_character(chart: ChartData, exponent: MultiIndex) -> int:
    """
    Характер μ_{w_i} на мономе карты: (-e_s + Σ_{j≠i} w_j·m_j) mod w_i.

    Действие ζ: s -> ζ·s, ũ_j -> ζ^{-w_j}·ũ_j сохраняет x_j = s^{w_j}·ũ_j.
    """
    total = -exponent[chart.slot]
    for var, e in enumerate(exponent):
        if var != chart.slot and e:
            total += chart.weight_of(var) * e
    return total % chart.stabilizer_order


def transform_characters(chart: ChartData, poly: Polynomial) -> Set[int]:
    """Множество характеров термов многочлена карты."""
    return {chart_character(chart, beta) for beta in poly.support()}


def _slice_images(chart: ChartData) -> Dict[str, Polynomial]:
    """Срез x̃_i = 1: координаты системы -> координаты карты без s."""
    images = {}
    for var, name in enumerate(chart.frame.vars):
        if var == chart.slot:
            images[name] = Polynomial.constant(chart.chart_vars, 1)
        else:
            images[name] = Polynomial.variable(chart.chart_vars, var)
    return images


def dehomogenize(poly: Polynomial, chart: ChartData) -> Polynomial:
    """Многочлен от координат системы центра в координатах карты при s = 1."""
    return poly.compose(_slice_images(chart), chart.chart_vars)


# ============================================================================
# НАЧАЛЬНЫЕ ФОРМЫ И СОБСТВЕННЫЕ ПРООБРАЗЫ
# ============================================================================

def _weights_of(centre: MarkedCentre, frame: CoordinateFrame, series: TruncatedSeries) -> Dict[MultiIndex, int]:
    return {beta: centre.monomial_weight(beta, frame) for beta in series.body.support()}


def _certified_expansion(centre: MarkedCentre, f) -> Tuple[TruncatedSeries, CoordinateFrame, int]:
    """
    Разложение f в координатах центра, в котором все термы минимального веса видимы.

    Returns:
        (ряд, система, v_ℱ(f))

    Raises:
        MathError: f = 0 или неполиномиальные координаты при k < n
        TruncationError: предел усечения исчерпан
    """
    local = centre.localize(f)
    if local.is_known_zero:
        raise MathError("initial form of zero")
    trunc = initial_truncation([local.body])
    while True:
        frame = centre.local_frame(trunc)
        series = frame.express(local)
        if series.is_zero_body:
            if series.exact:
                raise MathError("initial form of zero")
            trunc *= 2
        else:
            weights = _weights_of(centre, frame, series)
            value = min(weights.values())
            if series.exact:
                return series, frame, value
            if centre.length < centre.nvars:
                raise MathError("initial form needs polynomial coordinates")
            # невидимые термы имеют вес >= (T+1)·w_min
            w_min = min(centre.weights)
            if value < (series.trunc_order + 1) * w_min:
                return series, frame, value
            trunc = max(trunc + 1, value // w_min + 1)
        if trunc > settings.TRUNC_CAP:
            raise TruncationError()


def initial_form(f, centre: MarkedCentre) -> Polynomial:
    """
    Начальная форма: сумма термов разложения f с v_ℱ(x^β) = v_ℱ(f).

    Args:
        f: Многочлен в координатах пользователя
        centre: Центр (совместимые координаты строятся по его параметрам)

    Returns:
        Многочлен от совместимых координат центра (имена переменных пользователя)
    """
    series, frame, value = _certified_expansion(centre, f)
    weights = _weights_of(centre, frame, series)
    terms = {beta: c for beta, c in series.body.iter_terms() if weights[beta] == value}
    return Polynomial.from_terms(frame.vars, terms)


def _as_ideal(ideal: Union[Ideal, Sequence[Polynomial]]) -> Ideal:
    return ideal if isinstance(ideal, Ideal) else Ideal.of(list(ideal))


def proper_transform(ideal: Union[Ideal, Sequence[Polynomial]], centre: MarkedCentre,
                     chart: ChartData) -> Ideal:
    """
    Собственный прообраз идеала в карте.

    Каждый генератор подставляется в карту и делится на s^{v_ℱ(g)}. Проверяется, что
    деление точное, что s^{v_ℱ(g)} - точная степень, что все термы имеют один характер μ_{w_i}
    и что срез s = 0 совпадает с начальной формой на срезе x̃_i = 1.

    Returns:
        Ideal от chart.chart_vars

    Raises:
        MathError: неточные генераторы
        InvariantViolation: если проверки нарушены (ошибка нормирования)
    """
    ideal = _as_ideal(ideal)
    if not ideal.exact:
        raise MathError("input generators must be exact polynomials")
    frame = chart.frame
    slot = chart.slot
    transforms: List[Polynomial] = []
    for g in ideal.gens:
        if g.is_known_zero:
            continue
        series = frame.express(centre.localize(g))
        weights = _weights_of(centre, frame, series)
        value = min(weights.values())
        substituted = series.body.compose(chart.images, chart.chart_vars)
        exponents = [beta[slot] for beta in substituted.support()]
        if min(exponents) != value:
            raise InvariantViolation(f"exceptional exponent {min(exponents)} differs from valuation {value}")
        terms = {beta[:slot] + (beta[slot] - value,) + beta[slot + 1:]: c for beta, c in substituted.iter_terms()}
        transform = Polynomial.from_terms(chart.chart_vars, terms)

        if len(transform_characters(chart, transform)) != 1:
            raise InvariantViolation("proper transform is not homogeneous for the stabilizer")
        leading = {beta: c for beta, c in series.body.iter_terms() if weights[beta] == value}
        initial = dehomogenize(Polynomial.from_terms(frame.vars, leading), chart)
        if transform.substitute_zero([slot]) != initial:
            raise InvariantViolation("exceptional slice differs from the initial form")
        transforms.append(transform)

    logger.debug(f"Карта {chart.index}: собственный прообраз ({', '.join(str(t) for t in transforms)})")
    return Ideal.of(transforms, chart.chart_vars)


def check_initialisation_invariance(ideal: Union[Ideal, Sequence[Polynomial]],
                                    point: Optional[Sequence] = None) -> bool:
    """
    Инвариант идеала начальных форм (в начале совместимых координат) равен инварианту идеала в точке.
    """
    ideal = _as_ideal(ideal)
    centre, _ = associated_centre_m2(ideal, point)
    forms = [initial_form(g.body, centre) for g in ideal.gens if not g.is_known_zero]
    initialised, _ = associated_centre_m2(Ideal.of(forms, centre.vars))
    same = tuple(initialised.invariant) == tuple(centre.invariant)
    if not same:
        logger.warning(f"Инициализация изменила инвариант: {tuple(str(a) for a in centre.invariant)} -> "
                       f"{tuple(str(a) for a in initialised.invariant)}")
    return same


# ============================================================================
# ОДНО РАЗДУТИЕ И ДРАЙВЕР РАЗРЕШЕНИЯ
# ============================================================================

@dataclass
class BlowUpResult:
    """Центр раздутия и собственные прообразы во всех картах."""

    centre: MarkedCentre
    charts: List[Tuple[ChartData, Ideal]]


def blow_up(ideal: Union[Ideal, Sequence[Polynomial]], point: Optional[Sequence] = None,
            centre: Optional[MarkedCentre] = None) -> BlowUpResult:
    """
    Раздуть идеал в ассоциированном центре точки (или в заданном центре).

    Raises:
        MathError: нулевой центр (точка гладкая или не на многообразии), неполиномиальные координаты
    """
    ideal = _as_ideal(ideal)
    if centre is None:
        centre, _ = associated_centre_m2(ideal, point)
    if centre.length == 0:
        raise MathError("cannot blow up the zero centre")
    charts = []
    for index in range(1, centre.length + 1):
        chart = chart_substitution(centre, index)
        charts.append((chart, proper_transform(ideal, centre, chart)))
    logger.info(f"Раздутие в центре {centre}: {len(charts)} карт")
    return BlowUpResult(centre, charts)


def _is_smooth_value(invariant: Sequence[Fraction]) -> bool:
    return all(a == 1 for a in invariant)


def inspection_points(nvars: int, samples: Sequence[Sequence] = ()) -> List[Tuple[Fraction, ...]]:
    """Начало координат, сетка GRID_VALUES^n и точки пользователя, без повторов."""
    origin = (Fraction(0),) * nvars
    grid = product(*(tuple(Fraction(v) for v in settings.GRID_VALUES),) * nvars)
    points: List[Tuple[Fraction, ...]] = []
    seen = set()
    for point in chain([origin], grid, (tuple(Fraction(c) for c in p) for p in samples)):
        if len(point) != nvars:
            raise MathError("point dimension does not match variables")
        if point not in seen:
            seen.add(point)
            points.append(point)
    return points


@dataclass
class ResolutionNode:
    """
    Узел дерева раздутий.

    Attributes:
        ideal: Идеал в координатах узла
        depth: Глубина (корень - 0)
        chart: Карта, ведущая в узел (None для корня)
        invariants: Инварианты в проверяемых точках на V(I)
        invariant: maxinv по проверяемым точкам (() если точек нет)
        point: Точка, где достигается maxinv
        centre: Центр раздутия (None для листьев)
        regime: Откуда получен maxinv: points или strata
        children: Дочерние узлы по картам
    """

    ideal: Ideal
    depth: int
    chart: Optional[ChartData] = None
    invariants: Dict[Tuple[Fraction, ...], Tuple[Fraction, ...]] = field(default_factory=dict)
    invariant: Tuple[Fraction, ...] = ()
    point: Optional[Tuple[Fraction, ...]] = None
    centre: Optional[MarkedCentre] = None
    regime: str = REGIME_POINTS
    children: List["ResolutionNode"] = field(default_factory=list)

    @property
    def inspected(self) -> bool:
        return bool(self.invariants)

    @property
    def smooth(self) -> bool:
        return all(_is_smooth_value(value) for value in self.invariants.values())

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()

    def as_mapping(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "depth": self.depth,
            "vars": list(self.ideal.vars),
            "ideal": [str(g) for g in self.ideal.gens],
            "invariant": list(self.invariant),
            "regime": self.regime,
            "smooth": self.smooth,
            "inspected_points": len(self.invariants),
        }
        if self.chart is not None:
            data.update(self.chart.as_mapping())
        if self.point is not None:
            data["point"] = list(self.point)
        if self.centre is not None:
            data["centre"] = {
                "parameters": list(self.centre.user_parameters()),
                "weights": list(self.centre.weights),
                "marking": self.centre.marking,
            }
        data["children"] = [child.as_mapping() for child in self.children]
        return data


@dataclass
class ResolutionTrace:
    """Дерево раздутий, число раздутий и признак полноты."""

    root: ResolutionNode
    steps: int = 0
    complete: bool = True
    message: str = ""

    def verify(self):
        """
        Проверить строгое убывание maxinv на каждом ребре.

        Raises:
            InvariantViolation: если убывание нарушено
        """
        for node in self.root.walk():
            for child in node.children:
                if not child.inspected:
                    continue
                if compare_inv(child.invariant, node.invariant) >= 0:
                    raise InvariantViolation(
                        f"invariant did not decrease on chart {child.chart.index}: "
                        f"{tuple(str(a) for a in child.invariant)} vs {tuple(str(a) for a in node.invariant)}"
                    )

    def as_mapping(self) -> Dict[str, Any]:
        return {
            "steps": self.steps,
            "complete": self.complete,
            "message": self.message,
            "trace": self.root.as_mapping(),
        }


def _inspect(node: ResolutionNode, samples: Sequence[Sequence], use_strata: bool):
    """Заполнить инварианты узла в проверяемых точках и режим maxinv."""
    ideal = node.ideal
    for point in inspection_points(ideal.nvars, samples):
        if ideal.vanishes_at(point):
            centre, _ = associated_centre_m2(ideal, point)
            node.invariants[point] = tuple(centre.invariant)
    if not node.invariants:
        return
    node.invariant = max_invariant(node.invariants.values())
    node.point = next(p for p, value in node.invariants.items() if value == node.invariant)
    if not use_strata or node.smooth:
        return
    try:
        global_value = global_max_invariant(ideal).invariant
    except (GuardExceeded, MathError) as e:
        logger.debug(f"Глобальные страты недоступны на глубине {node.depth}: {e}")
        return
    if tuple(global_value) == node.invariant:
        node.regime = REGIME_STRATA
    else:
        logger.warning(f"Страты дают {tuple(str(a) for a in global_value)}, точки - "
                       f"{tuple(str(a) for a in node.invariant)}; используется режим points")


def resolve(ideal: Union[Ideal, Sequence[Polynomial]], point: Optional[Sequence] = None,
            max_steps: Optional[int] = None, samples: Sequence[Sequence] = (),
            use_strata: bool = True) -> ResolutionTrace:
    """
    Раздувать в ассоциированном центре точки с максимальным инвариантом, пока все карты
    не станут гладкими в проверяемых точках или не кончатся шаги.

    Args:
        ideal: Идеал (точные многочлены)
        point: Дополнительная точка корня (подсказка)
        max_steps: Предельная глубина дерева (по умолчанию settings.DEFAULT_MAX_STEPS)
        samples: Дополнительные точки корня
        use_strata: Сверять maxinv с глобальными стратами

    Returns:
        ResolutionTrace (проверенная на строгое убывание)

    Raises:
        InvariantViolation: нарушено строгое убывание
        MathError: неполиномиальные координаты центра и т.п.
    """
    ideal = _as_ideal(ideal)
    if not ideal.exact:
        raise MathError("input generators must be exact polynomials")
    if ideal.is_zero:
        raise MathError("zero ideal has no associated centre")
    if max_steps is None:
        max_steps = settings.DEFAULT_MAX_STEPS
    if max_steps < 1:
        raise MathError("max steps must be at least 1")
    root_samples = list(samples) + ([point] if point is not None else [])

    root = ResolutionNode(ideal, 0)
    trace = ResolutionTrace(root)
    pending = [(root, root_samples)]
    while pending:
        node, node_samples = pending.pop(0)
        _inspect(node, node_samples, use_strata)
        if not node.inspected or node.smooth:
            continue
        if node.depth >= max_steps:
            trace.complete = False
            continue
        result = blow_up(node.ideal, node.point)
        node.centre = result.centre
        trace.steps += 1
        for chart, transform in result.charts:
            child = ResolutionNode(transform, node.depth + 1, chart)
            node.children.append(child)
            pending.append((child, ()))

    trace.verify()
    if root.smooth:
        trace.message = MESSAGE_ALREADY_SMOOTH
    elif trace.complete:
        trace.message = "resolved at inspected points"
    else:
        trace.message = "max steps reached"
    logger.info(f"resolve: {trace.steps} раздутий, {trace.message}")
    return trace
