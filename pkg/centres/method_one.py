"""
File: centres/method_one.py
Purpose:
    Метод 1: ассоциированный маркированный центр в точке через последовательную
    минимизацию Ξ по множествам Ньютона с явными заменами координат.

Responsibilities:
    - CentreSearchState: состояние поиска (система координат, генераторы, частичный инвариант)
    - start_state / step / associated_centre_m1
    - bcompletion_oracle: независимый пересчет a_{j+1} через допустимость b-пополнений
    - run_with_deepening: повтор вычисления с удвоением порядка усечения

Key Design Decisions:
    - Свидетель β - наименьший в grlex минимизатор; l - наименьшая свободная позиция с β_l > 0;
      генератор - наименьший по индексу с ненулевым коэффициентом при β
    - Новый параметр ∂^{β-e_l} f нормируется и становится координатой на позиции j
    - Генераторы каждый раз заново выражаются из исходных (локальных) генераторов

Notes:
    - Все ошибки усечения поднимаются как TruncationError и перехватываются run_with_deepening
"""
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, TypeVar, Union

from algebra.ideal import Ideal
from algebra.polynomial import Polynomial, translate_to_origin
from algebra.series import CoordinateFrame, TruncatedSeries
from centres.invariants import delta, gamma_candidates, simplex_points
from centres.newton_graph import NewtonSet, hyperplane_below, min_xi_over_newton, newton_set
from centres.weighting import (MarkedCentre, admissible_by_membership, b_completion, initial_truncation,
                               is_admissible)
from config.settings import settings
from utils.exceptions import InvariantViolation, MathError, TruncationError
from utils.logger import logger

T = TypeVar("T")


@dataclass(frozen=True)
class CentreSearchState:
    """
    Состояние поиска центра.

    Attributes:
        ideal: Исходный идеал (координаты пользователя)
        point: Точка
        local: Генераторы, сдвинутые в начало координат
        frame: Текущая система координат (принятые параметры - первые позиции)
        generators: Локальные генераторы, выраженные в текущей системе
        invariant: Частичный инвариант (a_1..a_j)
        trace: Записи о шагах
        certified: Все решения сертифицированы (без проверки по модулю m^{T+1})
    """

    ideal: Ideal
    point: Tuple[Fraction, ...]
    local: Tuple[Polynomial, ...]
    frame: CoordinateFrame
    generators: Tuple[TruncatedSeries, ...]
    invariant: Tuple[Fraction, ...] = ()
    trace: Tuple[Dict[str, Any], ...] = field(default=())
    certified: bool = True

    @property
    def j(self) -> int:
        return len(self.invariant)

    @property
    def nvars(self) -> int:
        return self.ideal.nvars

    @property
    def trunc_order(self) -> int:
        return self.frame.trunc_order

    def partial_centre(self) -> MarkedCentre:
        """Текущий (полу-ассоциированный) центр 𝒥^{(j)}."""
        params = [self.frame.coordinate_in_original(p) for p in range(self.j)]
        return MarkedCentre.from_local(self.ideal.vars, params, self.invariant, self.point, self.frame,
                                       self.certified)

    def with_frame(self, frame: CoordinateFrame) -> "CentreSearchState":
        generators = tuple(frame.express(g) for g in self.local)
        return replace(self, frame=frame, generators=generators)


def prepare_ideal(ideal: Union[Ideal, Sequence[Polynomial]], point: Optional[Sequence] = None
                  ) -> Tuple[Ideal, Tuple[Fraction, ...], Tuple[Polynomial, ...]]:
    """
    Проверить предусловия и сдвинуть идеал в начало координат.

    Raises:
        MathError: нулевой идеал, "point not on the variety"
    """
    if not isinstance(ideal, Ideal):
        ideal = Ideal.of(list(ideal))
    if not ideal.exact:
        raise MathError("input generators must be exact polynomials")
    if ideal.is_zero:
        raise MathError("zero ideal has no associated centre")
    if point is None:
        point = ideal.base_point or (0,) * ideal.nvars
    point = tuple(Fraction(c) for c in point)
    if len(point) != ideal.nvars:
        raise MathError("point dimension does not match variables")
    if not ideal.vanishes_at(point):
        raise MathError("point not on the variety")
    local = tuple(translate_to_origin(g.body, point) for g in ideal.gens if not g.is_known_zero)
    return ideal, point, local


def start_state(ideal: Union[Ideal, Sequence[Polynomial]], point: Optional[Sequence] = None,
                trunc_order: Optional[int] = None) -> CentreSearchState:
    """
    Стартовое состояние () в точке.

    Args:
        ideal: Идеал (точные многочлены)
        point: Точка на V(I) (по умолчанию начало координат)
        trunc_order: Порядок усечения (по умолчанию максимальная степень + 2)

    Raises:
        MathError: "point not on the variety", нулевой идеал
    """
    ideal, point, local = prepare_ideal(ideal, point)
    if trunc_order is None:
        trunc_order = initial_truncation(local)
    frame = CoordinateFrame.identity(ideal.vars, trunc_order)
    generators = tuple(TruncatedSeries.exact_of(g) for g in local)
    return CentreSearchState(ideal, point, local, frame, generators)


def centre_admissible(state: CentreSearchState, newton: NewtonSet) -> Tuple[bool, bool]:
    """
    Допустим ли текущий центр 𝒥^{(j)}.

    Returns:
        (ответ, сертифицирован ли он)
    """
    if state.j == 0:
        return False, True
    try:
        return hyperplane_below(state.invariant, newton), True
    except TruncationError:
        centre = state.partial_centre()
        if not centre.exact:
            logger.debug(f"Допустимость (j={state.j}) проверяется по модулю m^{state.trunc_order + 1}")
        return admissible_by_membership(centre, state.local, use_bodies=True), centre.exact


def finish(state: CentreSearchState) -> MarkedCentre:
    centre = state.partial_centre()
    logger.debug(f"Центр найден: {centre}")
    return centre


def step(state: CentreSearchState) -> Union[CentreSearchState, MarkedCentre]:
    """
    Один шаг Метода 1.

    Returns:
        Новое состояние с добавленным элементом инварианта, либо MarkedCentre, если центр допустим

    Raises:
        TruncationError: если текущего усечения недостаточно
        InvariantViolation: если длина инварианта превысила бы размерность
    """
    frame = state.frame
    newton = newton_set(state.generators, frame.slots)
    admissible, certified = centre_admissible(state, newton)
    if admissible:
        return finish(replace(state, certified=state.certified and certified))
    if state.j == state.nvars:
        raise InvariantViolation("invariant length would exceed the dimension")

    value, beta = min_xi_over_newton(state.invariant, newton)
    if state.invariant and value < state.invariant[-1]:
        raise InvariantViolation(f"next entry {value} is below {state.invariant[-1]}")

    position = next(p for p in range(state.j, state.nvars) if beta[p] > 0)
    exponent = frame.variable_exponent(beta)
    index = next(i for i, g in enumerate(state.generators) if g.body.coefficient(exponent) != 0)
    reduced = list(beta)
    reduced[position] -= 1
    new_param = state.generators[index].derivative(frame.variable_exponent(tuple(reduced)))

    new_frame, _ = frame.adopt(new_param, state.j, source=position)
    record = {
        "step": state.j + 1,
        "a": value,
        "witness": list(beta),
        "position": position,
        "generator": index,
        "trunc_order": frame.trunc_order,
    }
    logger.debug(f"Метод 1, шаг {state.j + 1}: a={value}, β={beta}, l={position}, генератор {index}")
    advanced = state.with_frame(new_frame)
    return replace(advanced, invariant=state.invariant + (value,), trace=state.trace + (record,))


def run_with_deepening(runner: Callable[[int], T], initial: int, cap: Optional[int] = None) -> T:
    """
    Запустить вычисление с порядком усечения initial, удваивая его при TruncationError.

    Raises:
        TruncationError: если достигнут предел cap
    """
    cap = cap or settings.TRUNC_CAP
    order = min(initial, cap)
    while True:
        try:
            return runner(order)
        except TruncationError:
            if order >= cap:
                logger.info(f"Порядок усечения достиг предела {cap}")
                raise TruncationError(f"raise truncation: cap {cap} reached")
            order = min(order * 2, cap)
            logger.info(f"Недостаточно усечения, повтор с T={order}")


def run_method_one(ideal: Ideal, point: Sequence, trunc_order: int) -> Tuple[MarkedCentre, List[Dict[str, Any]]]:
    state = start_state(ideal, point, trunc_order)
    while True:
        result = step(state)
        if isinstance(result, MarkedCentre):
            return result, list(state.trace)
        state = result


def associated_centre_m1(ideal: Union[Ideal, Sequence[Polynomial]], point: Optional[Sequence] = None,
                         trunc_cap: Optional[int] = None) -> Tuple[MarkedCentre, List[Dict[str, Any]]]:
    """
    Ассоциированный центр в точке (Метод 1).

    Args:
        ideal: Идеал
        point: Точка (по умолчанию начало координат)
        trunc_cap: Предел порядка усечения

    Returns:
        (MarkedCentre, трасса шагов)
    """
    ideal, point, local = prepare_ideal(ideal, point)
    centre, trace = run_with_deepening(lambda order: run_method_one(ideal, point, order),
                                       initial_truncation(local), trunc_cap)
    logger.info(f"Метод 1: инвариант {tuple(str(a) for a in centre.invariant)} в точке {point}")
    return centre, trace


def bcompletion_oracle(state: CentreSearchState) -> Fraction:
    """
    Независимый пересчет a_{j+1} = max{b : 𝒥^{(j)}[b] допустим}.

    Кандидаты b берутся из Γ(a_1..a_j) до оценки max_i deg g_i / min(1 - Δ).
    """
    centre = state.partial_centre()
    degree = max(g.body.degree() for g in state.generators)
    slack = min((1 - delta(state.invariant, beta) for beta in simplex_points(state.invariant)),
                default=Fraction(1))
    upper = Fraction(degree) / slack
    best = None
    for candidate in gamma_candidates(state.invariant, upper):
        completion = b_completion(centre, candidate, state.trunc_order)
        if not is_admissible(completion, state.ideal, state.trunc_order):
            break
        best = candidate
    if best is None:
        raise InvariantViolation("no admissible completion")
    return best
