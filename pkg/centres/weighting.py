"""
File: centres/weighting.py
Purpose:
    Маркированные центры, весовые нормирования, фильтрации и допустимость.

Responsibilities:
    - MarkedCentre: параметры, инвариант, веса, маркировка, базовая точка, совместимые координаты
    - weighted_order / valuation (с флагом сертификации)
    - filtration_piece, is_admissible, compatible_check, b_completion
    - Реэкспорт числовой части (delta, xi, marking_of, compare_inv, gamma_member)

Key Design Decisions:
    - Параметры центра хранятся в локальных координатах (после сдвига базовой точки в начало)
    - Совместимая система координат строится обращением этальной замены и кэшируется в центре
    - Если усечения не хватает, допустимость проверяется через локальную принадлежность
      идеалу ℱ_d (базис Грёбнера)

Notes:
    - Нулевой центр () - стартовое состояние поиска; для него is_admissible всегда False
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import ceil
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

from sympy import Matrix, Rational

from algebra.groebner import contains_locally
from algebra.ideal import Ideal
from algebra.polynomial import MultiIndex, Polynomial
from algebra.series import CoordinateFrame, SeriesLike, TruncatedSeries
from centres.invariants import (INFINITY, Extended, PreInvariant, compare_inv, delta,
                                gamma_member, marking_of, simplex_points, xi)
from centres.newton_graph import hyperplane_below, newton_set
from config.settings import settings
from utils.exceptions import MathError, TruncationError
from utils.logger import logger

__all__ = [
    "INFINITY", "MarkedCentre", "PreInvariant", "Valuation", "admissible_by_membership", "b_completion",
    "compare_inv", "compatible_check", "delta", "filtration_exponents", "filtration_piece", "gamma_member",
    "initial_truncation", "is_admissible", "marking_of", "simplex_points", "valuation",
    "weighted_order", "xi",
]


class Valuation(NamedTuple):
    """Значение нормирования и флаг сертификации."""

    value: Extended
    certified: bool


def initial_truncation(polys: Sequence[Polynomial]) -> int:
    """Стартовый порядок усечения: максимальная степень + запас из настроек."""
    degree = max((p.degree() for p in polys), default=0)
    return max(degree, 1) + settings.TRUNC_MARGIN


def _rank(polys: Sequence[SeriesLike], nvars: int) -> int:
    rows = []
    for p in polys:
        linear = TruncatedSeries.coerce(p).body.linear_part()
        coefficients = [linear.get(i, Fraction(0)) for i in range(nvars)]
        rows.append([Rational(c.numerator, c.denominator) for c in coefficients])
    if not rows:
        return 0
    return Matrix(rows).rank()


def _as_ideal(ideal: Union[Ideal, Sequence[Polynomial]]) -> Ideal:
    return ideal if isinstance(ideal, Ideal) else Ideal.of(list(ideal))


@dataclass(frozen=True)
class MarkedCentre:
    """
    Маркированный центр (x_1^{a_1}, ..., x_k^{a_k}) в точке.

    Attributes:
        vars: Переменные объемлющего пространства
        params: Параметры x_1..x_k в локальных координатах (ряды, нулевые в начале)
        invariant: Инвариант (a_1..a_k)
        weights: Веса w_i = d / a_i
        marking: Маркировка d
        base_point: Базовая точка в координатах пользователя
        frame: Совместимая система координат (параметры - первые k позиций), если известна
    """

    vars: Tuple[str, ...]
    params: Tuple[TruncatedSeries, ...]
    invariant: PreInvariant
    weights: Tuple[int, ...]
    marking: int
    base_point: Tuple[Fraction, ...]
    frame: Optional[CoordinateFrame] = field(default=None, compare=False)
    certified: bool = field(default=True, compare=False)

    @classmethod
    def build(cls, variables: Sequence[str], params: Sequence[SeriesLike], invariant: Sequence,
              base_point: Sequence = None) -> "MarkedCentre":
        """
        Построить центр по параметрам в координатах пользователя.

        Raises:
            MathError: если параметры не обращаются в ноль в точке или зависимы
        """
        variables = tuple(variables)
        point = tuple(Fraction(c) for c in base_point) if base_point is not None else (Fraction(0),) * len(variables)
        local = []
        for param in params:
            series = TruncatedSeries.coerce(param).with_vars(variables)
            if not series.exact:
                local.append(series)
                continue
            local.append(TruncatedSeries.exact_of(series.body.translate(point)))
        return cls.from_local(variables, local, invariant, point)

    @classmethod
    def from_local(cls, variables: Sequence[str], params: Sequence[SeriesLike], invariant: Sequence,
                   base_point: Sequence = None, frame: Optional[CoordinateFrame] = None,
                   certified: bool = True) -> "MarkedCentre":
        variables = tuple(variables)
        point = tuple(Fraction(c) for c in base_point) if base_point is not None else (Fraction(0),) * len(variables)
        invariant = PreInvariant(invariant)
        local = tuple(TruncatedSeries.coerce(p).with_vars(variables) for p in params)
        if len(local) != len(invariant):
            raise MathError("parameter count does not match invariant length")
        if len(invariant) > len(variables):
            raise MathError("invariant is longer than the ambient dimension")
        if any(p.constant_term() != 0 for p in local):
            raise MathError("parameters must vanish at the base point")
        if frame is None and _rank(local, len(variables)) < len(local):
            raise MathError("parameters are not independent at the base point")
        marking, weights = marking_of(invariant)
        return cls(variables, local, invariant, weights, marking, point, frame, certified)

    @classmethod
    def zero(cls, variables: Sequence[str], base_point: Sequence = None) -> "MarkedCentre":
        """Нулевой центр ()."""
        return cls.from_local(variables, (), (), base_point, CoordinateFrame.identity(variables, 1))

    @property
    def length(self) -> int:
        return len(self.invariant)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    @property
    def exact(self) -> bool:
        return all(p.exact for p in self.params)

    def local_frame(self, trunc_order: int) -> CoordinateFrame:
        """Совместимая система координат с порядком усечения не меньше trunc_order."""
        frame = self.frame
        if frame is not None and (frame.exact or frame.trunc_order >= trunc_order):
            return frame
        return CoordinateFrame.from_parameters(self.vars, self.params, max(trunc_order, 1))

    def localize(self, f: SeriesLike) -> TruncatedSeries:
        """Сдвинуть функцию из координат пользователя в локальные."""
        series = TruncatedSeries.coerce(f).with_vars(self.vars)
        if not series.exact:
            return series
        return TruncatedSeries.exact_of(series.body.translate(self.base_point))

    def expand(self, f: SeriesLike, trunc_order: Optional[int] = None) -> TruncatedSeries:
        """Разложить функцию пользователя в совместимых координатах центра."""
        local = self.localize(f)
        if trunc_order is None:
            trunc_order = max(local.trunc_order, 1) + settings.TRUNC_MARGIN
        return self.local_frame(trunc_order).express(local)

    def monomial_weight(self, beta: MultiIndex, frame: CoordinateFrame) -> int:
        """Взвешенная степень Σ_{p<k} β_{slot(p)}·w_p."""
        return sum(beta[frame.slots[p]] * w for p, w in enumerate(self.weights))

    def user_parameters(self) -> Tuple[str, ...]:
        """Параметры в координатах пользователя (строки)."""
        shift = tuple(-c for c in self.base_point)
        result = []
        for p in self.params:
            body = p.body.translate(shift) if any(shift) else p.body
            result.append(str(body) if p.exact else f"{body} + O({p.trunc_order + 1})")
        return tuple(result)

    def __str__(self) -> str:
        parts = [f"({param})^{a}" for param, a in zip(self.user_parameters(), self.invariant)]
        return "(" + ", ".join(parts) + ")"


def weighted_order(centre: MarkedCentre, f: SeriesLike, trunc_order: Optional[int] = None) -> Valuation:
    """
    v_ℱ(f): минимум взвешенной степени по носителю разложения f в совместимых координатах.

    Args:
        centre: Маркированный центр
        f: Многочлен в координатах пользователя или ряд, уже выраженный в совместимых координатах
        trunc_order: Порядок усечения разложения

    Returns:
        Valuation(значение или +∞, сертифицировано ли)
    """
    if isinstance(f, TruncatedSeries):
        series = f
        frame = centre.local_frame(trunc_order or max(series.trunc_order, 1))
    else:
        if trunc_order is None:
            trunc_order = initial_truncation([f])
        frame = centre.local_frame(trunc_order)
        series = frame.express(centre.localize(f))

    if series.is_zero_body:
        return Valuation(INFINITY, series.exact)
    value = min(centre.monomial_weight(beta, frame) for beta in series.body.support())
    if series.exact or value == 0:
        return Valuation(Fraction(value), True)
    # невидимые термы имеют полную степень > T
    w_min = min(centre.weights) if centre.weights else 0
    certified = centre.length == centre.nvars and value <= (series.trunc_order + 1) * w_min
    return Valuation(Fraction(value), certified)


def valuation(centre: MarkedCentre, f: SeriesLike, trunc_order: Optional[int] = None) -> Valuation:
    """v_𝒥(f) = v_ℱ(f) / d, т.е. min Σ β_i / a_i."""
    value, certified = weighted_order(centre, f, trunc_order)
    if value is INFINITY:
        return Valuation(value, certified)
    return Valuation(value / centre.marking, certified)


def filtration_exponents(weights: Sequence[int], level: int) -> List[MultiIndex]:
    """Минимальные β с Σ β_i w_i >= level, по убыванию lex."""
    if level <= 0:
        return [(0,) * len(weights)]
    if not weights:
        return []
    bounds = [ceil(level / w) for w in weights]
    result = []
    for beta in product(*(range(b + 1) for b in bounds)):
        total = sum(b * w for b, w in zip(beta, weights))
        if total < level:
            continue
        if all(total - w < level for b, w in zip(beta, weights) if b > 0):
            result.append(beta)
    return sorted(result, reverse=True)


def filtration_piece(centre: MarkedCentre, level: int) -> List[Polynomial]:
    """
    Мономиальные генераторы ℱ_level в параметрах центра (координаты пользователя).

    Returns:
        Список многочленов x^β, где x - параметры центра
    """
    shift = tuple(-c for c in centre.base_point)
    user_params = [p.body.translate(shift) if any(shift) else p.body for p in centre.params]
    result = []
    for beta in filtration_exponents(centre.weights, level):
        monomial = Polynomial.constant(centre.vars, 1)
        for param, exponent in zip(user_params, beta):
            if exponent:
                monomial = monomial * param ** exponent
        result.append(monomial)
    return result


def _local_filtration(centre: MarkedCentre, level: int) -> List[Polynomial]:
    result = []
    for beta in filtration_exponents(centre.weights, level):
        monomial = Polynomial.constant(centre.vars, 1)
        for param, exponent in zip(centre.params, beta):
            if exponent:
                monomial = monomial * param.body ** exponent
        result.append(monomial)
    return result


def admissible_by_membership(centre: MarkedCentre, local: Sequence[Polynomial],
                             use_bodies: bool = False) -> bool:
    """
    v_ℱ(g) >= d для всех g ⇔ I ⊆ ℱ_d в локальном кольце.

    Args:
        centre: Центр
        local: Генераторы в локальных координатах
        use_bodies: Разрешить усеченные параметры (ответ верен по модулю m^{T+1})

    Raises:
        TruncationError: параметры усечены и use_bodies=False
        GuardExceeded: задача больше настольного масштаба
    """
    if not centre.exact and not use_bodies:
        raise TruncationError()
    piece = _local_filtration(centre, centre.marking)
    return all(contains_locally(piece, g) for g in local)


def is_admissible(centre: MarkedCentre, ideal: Union[Ideal, Sequence[Polynomial]],
                  trunc_order: Optional[int] = None) -> bool:
    """
    I-допустимость: v_𝒥(I) >= 1.

    Args:
        centre: Маркированный центр
        ideal: Идеал в координатах пользователя (точные генераторы)
        trunc_order: Порядок усечения совместимых координат

    Returns:
        True, если все минимальные элементы множества Ньютона лежат не ниже гиперплоскости

    Raises:
        TruncationError: если ответ нельзя сертифицировать
    """
    if centre.length == 0:
        return False
    ideal = _as_ideal(ideal)
    local = [g.body.translate(centre.base_point) for g in ideal.gens]
    if trunc_order is None:
        trunc_order = max(initial_truncation(local), ceil(sum(centre.invariant)))
    frame = centre.local_frame(trunc_order)
    gens = [frame.express(g) for g in local]
    try:
        return hyperplane_below(centre.invariant, newton_set(gens, frame.slots))
    except TruncationError:
        logger.debug("Допустимость не определена усечением, проверка через базис Грёбнера")
        return admissible_by_membership(centre, local)


def compatible_check(centre: MarkedCentre, candidates: Sequence[SeriesLike],
                     trunc_order: Optional[int] = None) -> bool:
    """
    Совместимы ли кандидаты y_1..y_k с центром: параметры и v_ℱ(y_i) = w_i.

    Raises:
        TruncationError: если значения нормирования не сертифицированы
    """
    if len(candidates) != centre.length:
        return False
    local = [centre.localize(c) for c in candidates]
    if any(p.constant_term() != 0 for p in local):
        return False
    if _rank(local, centre.nvars) < len(local):
        return False
    for candidate, weight in zip(local, centre.weights):
        if trunc_order is None:
            order = initial_truncation([candidate.body])
        else:
            order = trunc_order
        frame = centre.local_frame(order)
        value, certified = weighted_order(centre, frame.express(candidate), order)
        if not certified:
            raise TruncationError()
        if value != weight:
            return False
    return True


def b_completion(centre: MarkedCentre, b, trunc_order: Optional[int] = None) -> MarkedCentre:
    """
    b-пополнение (x_1^{a_1}, ..., x_j^{a_j}, y_{j+1}^b, ..., y_n^b).

    Недостающие параметры - оставшиеся координаты совместимой системы центра.

    Raises:
        MathError: если b < a_j
    """
    b = Fraction(b)
    if centre.length and b < centre.invariant[-1]:
        raise MathError(f"completion value {b} is below the last invariant entry")
    if b <= 0:
        raise MathError("completion value must be positive")
    if trunc_order is None:
        trunc_order = max((p.trunc_order for p in centre.params), default=1) + settings.TRUNC_MARGIN
    frame = centre.local_frame(trunc_order)
    params = list(centre.params)
    for position in range(centre.length, centre.nvars):
        params.append(frame.coordinate_in_original(position))
    invariant = tuple(centre.invariant) + (b,) * (centre.nvars - centre.length)
    return MarkedCentre.from_local(centre.vars, params, invariant, centre.base_point, frame)
