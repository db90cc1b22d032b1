"""
File: centres/method_two.py
Purpose:
    Метод 2: ассоциированный центр через идеалы производных D^{≤m}I и рекурсию D[β].

Responsibilities:
    - DerivativeBrackets: мемоизированные идеалы D[β] в текущей системе координат
    - d_bracket: D[β] для отдельного вызова
    - next_entry_m2 / maximal_contact / admissible_m2
    - associated_centre_m2: полный прогон с углублением усечения

Key Design Decisions:
    - D[(β_1)] = D^{≤β_1}I, D[(β',m)] = D^{≤m}(D[β']|_{V(x_l)}), где x_l - последний принятый параметр β'
    - Проверка "D[β] = (1) в точке" - вычисление свободных членов, без Gröbner
    - Замены координат те же, что в Методе 1 (CoordinateFrame.adopt), поэтому
      ограничения всегда берутся на координатные срезы
    - Кэш D[β] привязан к эпохе системы координат

Notes:
    - Счетчик "derivative_generators" используется командой bench
"""
from dataclasses import replace
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from algebra.ideal import Ideal, WorkCounter, derive_ideal, restrict_to_coordinate_slice
from algebra.polynomial import MultiIndex, Polynomial, grlex_key
from algebra.series import CoordinateFrame, TruncatedSeries
from centres.invariants import INFINITY, Extended, delta, simplex_points
from centres.method_one import CentreSearchState, finish, prepare_ideal, run_with_deepening, start_state
from centres.weighting import MarkedCentre, admissible_by_membership, initial_truncation
from utils.exceptions import InvariantViolation, MathError, TruncationError
from utils.logger import logger


class DerivativeBrackets:
    """
    Идеалы D[β] для генераторов, выраженных в системе frame.

    Attributes:
        ideal: Генераторы в текущих координатах
        frame: Система координат (позиции 0..j-1 - принятые параметры)
        counter: Счетчик порожденных производных
    """

    def __init__(self, ideal: Ideal, frame: CoordinateFrame, counter: Optional[WorkCounter] = None):
        self.ideal = ideal
        self.frame = frame
        self.counter = counter
        self._cache: Dict[Tuple[int, MultiIndex], Ideal] = {}
        self._restricted: Dict[Tuple[int, MultiIndex], Ideal] = {}

    @classmethod
    def of_state(cls, state: CentreSearchState, counter: Optional[WorkCounter] = None) -> "DerivativeBrackets":
        return cls(Ideal.of(state.generators, state.ideal.vars), state.frame, counter)

    def free_directions(self, killed: int) -> List[int]:
        return [self.frame.var_at(p) for p in range(killed, self.frame.nvars)]

    def bracket(self, beta: MultiIndex) -> Ideal:
        """D[β]; D[()] = I."""
        beta = tuple(beta)
        key = (self.frame.epoch, beta)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        if not beta:
            result = self.ideal
        elif len(beta) == 1:
            result = derive_ideal(self.ideal, beta[0], self.counter)
        else:
            parent = self.restricted(beta[:-1])
            result = derive_ideal(parent, beta[-1], self.counter, self.free_directions(len(beta) - 1))
        self._cache[key] = result
        return result

    def restricted(self, beta: MultiIndex) -> Ideal:
        """D[β]|_{V(x_l)} для l = len(β); при β = () - сам идеал."""
        beta = tuple(beta)
        if not beta:
            return self.ideal
        key = (self.frame.epoch, beta)
        cached = self._restricted.get(key)
        if cached is None:
            cached = restrict_to_coordinate_slice(self.bracket(beta), [self.frame.var_at(len(beta) - 1)])
            self._restricted[key] = cached
        return cached


def d_bracket(ideal: Union[Ideal, Sequence[Polynomial]], beta: MultiIndex,
              frame: Optional[CoordinateFrame] = None, counter: Optional[WorkCounter] = None) -> Ideal:
    """
    D[β] в начале координат.

    Args:
        ideal: Идеал в текущих координатах
        beta: Мультииндекс длины l
        frame: Система, в которой первые l-1 координат - принятые параметры (по умолчанию тождественная)
        counter: Счетчик работы

    Returns:
        Ideal
    """
    if not isinstance(ideal, Ideal):
        ideal = Ideal.of(list(ideal))
    if frame is None:
        frame = CoordinateFrame.identity(ideal.vars, max(g.trunc_order for g in ideal.gens))
    if len(beta) > ideal.nvars:
        raise MathError("multi-index longer than the dimension")
    return DerivativeBrackets(ideal, frame, counter).bracket(tuple(beta))


def _order_bounds(ideal: Ideal) -> Tuple[Optional[int], bool]:
    """
    ord_0 ограниченного идеала.

    Returns:
        (значение или нижняя оценка, сертифицировано ли); (None, True) - идеал точно нулевой
    """
    value, certified = ideal.order_at_origin()
    if certified:
        return value, True
    bounds = [g.order_lower_bound() for g in ideal.gens]
    lower = min(b for b in bounds if b is not None)
    return lower if value is None else min(value, lower), False


def next_entry_m2(state: CentreSearchState, brackets: DerivativeBrackets) -> Tuple[Fraction, MultiIndex]:
    """
    a_{j+1} = min Ξ(β) по β длины j+1 с Δ(β) < 1 и D[β] = (1) в точке.

    Для β' с Δ(β') < 1 наименьшее β_{j+1}, при котором D[(β', β_{j+1})] единичен,
    равно ord D[β']|_{V(x_j)}.

    Returns:
        (значение, свидетель β длины j+1 - наименьший в grlex)

    Raises:
        TruncationError: если порядок ограничения не сертифицирован и может дать меньшее Ξ
        InvariantViolation: если кандидатов нет
    """
    a = state.invariant
    best: Extended = INFINITY
    witness: Optional[MultiIndex] = None
    pending: List[Fraction] = []
    for prefix in simplex_points(a):
        order, certified = _order_bounds(brackets.restricted(prefix))
        if order is None:
            continue
        value = Fraction(order) / (1 - delta(a, prefix))
        if not certified:
            pending.append(value)
            continue
        beta = prefix + (order,)
        if value < best or (value == best and grlex_key(beta) < grlex_key(witness)):
            best, witness = value, beta

    if any(bound <= best for bound in pending):
        logger.debug(f"Метод 2: порядок D[β'] не сертифицирован при T={state.trunc_order}")
        raise TruncationError()
    if witness is None:
        raise InvariantViolation("no multi-index with delta below one")
    return best, witness


def maximal_contact(ideal: Ideal) -> TruncatedSeries:
    """
    Элемент максимального контакта: наименьший по индексу генератор порядка 1,
    нормированный на единичный старший линейный коэффициент.

    Raises:
        MathError: "not a maximal-contact ideal"
    """
    if ideal.is_unit_at_origin():
        raise MathError("not a maximal-contact ideal")
    for g in ideal.gens:
        linear = g.body.linear_part()
        if linear and g.trunc_order >= 1:
            return g.scale(1 / linear[min(linear)])
    raise MathError("not a maximal-contact ideal")


def admissible_m2(state: CentreSearchState, brackets: DerivativeBrackets) -> Tuple[bool, bool]:
    """
    Допустимость 𝒥^{(j)}: D[β]|_{V(x_j)} = (0) для всех β длины j с Δ(β) < 1.

    Returns:
        (ответ, сертифицирован ли он)
    """
    if state.j == 0:
        return False, True
    undecided = False
    for prefix in simplex_points(state.invariant):
        restricted = brackets.restricted(prefix)
        if not restricted.has_zero_bodies:
            return False, True
        # при j = n ограничения - константы, известные при T >= 0
        if not restricted.is_zero and not (state.j == state.nvars
                                           and all(g.trunc_order >= 0 for g in restricted.gens)):
            undecided = True
    if not undecided:
        return True, True
    centre = state.partial_centre()
    logger.debug(f"Метод 2: допустимость (j={state.j}) проверяется по модулю m^{state.trunc_order + 1}")
    return admissible_by_membership(centre, state.local, use_bodies=True), centre.exact


def step_m2(state: CentreSearchState, counter: Optional[WorkCounter] = None
            ) -> Union[CentreSearchState, MarkedCentre]:
    """
    Один шаг Метода 2.

    Raises:
        TruncationError: если текущего усечения недостаточно
        InvariantViolation: если длина инварианта превысила бы размерность
    """
    brackets = DerivativeBrackets.of_state(state, counter)
    admissible, certified = admissible_m2(state, brackets)
    if admissible:
        return finish(replace(state, certified=state.certified and certified))
    if state.j == state.nvars:
        raise InvariantViolation("invariant length would exceed the dimension")

    value, beta = next_entry_m2(state, brackets)
    if state.invariant and value < state.invariant[-1]:
        raise InvariantViolation(f"next entry {value} is below {state.invariant[-1]}")

    prefix, order = beta[:-1], beta[-1]
    selection = derive_ideal(brackets.restricted(prefix), order - 1, counter,
                             brackets.free_directions(len(prefix)))
    param = maximal_contact(selection)
    new_frame, position = state.frame.adopt(param, state.j)
    record: Dict[str, Any] = {
        "step": state.j + 1,
        "a": value,
        "witness": list(beta),
        "position": position,
        "parameter": str(param),
        "trunc_order": state.trunc_order,
    }
    logger.debug(f"Метод 2, шаг {state.j + 1}: a={value}, β={beta}, параметр {param}")
    advanced = state.with_frame(new_frame)
    return replace(advanced, invariant=state.invariant + (value,), trace=state.trace + (record,))


def run_method_two(ideal: Ideal, point: Sequence, trunc_order: int,
                   counter: Optional[WorkCounter] = None) -> Tuple[MarkedCentre, List[Dict[str, Any]]]:
    state = start_state(ideal, point, trunc_order)
    while True:
        result = step_m2(state, counter)
        if isinstance(result, MarkedCentre):
            return result, list(state.trace)
        state = result


def associated_centre_m2(ideal: Union[Ideal, Sequence[Polynomial]], point: Optional[Sequence] = None,
                         trunc_cap: Optional[int] = None, counter: Optional[WorkCounter] = None
                         ) -> Tuple[MarkedCentre, List[Dict[str, Any]]]:
    """
    Ассоциированный центр в точке (Метод 2).

    Args:
        ideal: Идеал
        point: Точка (по умолчанию начало координат)
        trunc_cap: Предел порядка усечения
        counter: Счетчик порожденных производных (для bench)

    Returns:
        (MarkedCentre, трасса шагов)
    """
    ideal, point, local = prepare_ideal(ideal, point)
    centre, trace = run_with_deepening(lambda order: run_method_two(ideal, point, order, counter),
                                       initial_truncation(local), trunc_cap)
    logger.info(f"Метод 2: инвариант {tuple(str(a) for a in centre.invariant)} в точке {point}")
    return centre, trace
