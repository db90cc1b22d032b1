"""
File: strata/global_strat.py
Purpose:
    Глобальные вычисления малого масштаба: максимальный порядок, идеалы страт A(a₁..a_j; b),
    максимальный инвариант через последовательные "перевороты" страт, инвариант в точке.

Responsibilities:
    - max_order: наименьшее m с D^{≤m}I = (1)
    - stratum_ideal / next_entry_global / global_max_invariant
    - invariant_at_point: сдвиг в точку и Метод 2

Key Design Decisions:
    - Все проверки "= (1)" - базисы Грёбнера (grevlex) с guard из settings
    - Параметры максимального контакта берутся только аффинно-линейными
      (элемент степени <= 1 в приведенном базисе); иначе глобальный режим недоступен
    - Замены координат аффинные и точные, поэтому D[β] и ограничения остаются многочленами

Notes:
    - При отказе глобального режима resolve использует только проверяемые точки
"""
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import ceil, floor
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from algebra.groebner import buchberger, is_unit_ideal
from algebra.ideal import Ideal, WorkCounter, derive_ideal
from algebra.polynomial import Polynomial
from algebra.series import CoordinateFrame, TruncatedSeries
from centres.invariants import delta, simplex_points
from centres.method_two import DerivativeBrackets, associated_centre_m2
from utils.exceptions import MathError
from utils.logger import logger


def _as_exact_ideal(ideal: Union[Ideal, Sequence[Polynomial]]) -> Ideal:
    if not isinstance(ideal, Ideal):
        ideal = Ideal.of(list(ideal))
    if not ideal.exact:
        raise MathError("input generators must be exact polynomials")
    return ideal


def max_order(ideal: Union[Ideal, Sequence[Polynomial]]) -> Optional[int]:
    """
    max_p ord_p I как наименьшее m с D^{≤m}I = (1).

    Returns:
        m, либо None для нулевого идеала

    Raises:
        GuardExceeded: задача больше настольного масштаба
    """
    ideal = _as_exact_ideal(ideal)
    if ideal.is_zero:
        return None
    bound = max(g.body.degree() for g in ideal.gens if not g.is_known_zero)
    for m in range(bound + 1):
        if is_unit_ideal(derive_ideal(ideal, m).polynomials()):
            return m
    raise MathError("derivative ideals never became the unit ideal")


@dataclass(frozen=True)
class GlobalState:
    """
    Состояние глобального вычисления.

    Attributes:
        ideal: Генераторы в текущих (аффинно замененных) координатах
        slots: Порядок позиций; принятые параметры - первые позиции
        invariant: Найденные элементы максимального инварианта
        parameters: Параметры в исходных координатах
        coordinates: Текущие координаты как многочлены от исходных
        trace: Записи о переворотах страт
    """

    ideal: Ideal
    slots: Tuple[int, ...]
    invariant: Tuple[Fraction, ...] = ()
    parameters: Tuple[Polynomial, ...] = ()
    coordinates: Tuple[Polynomial, ...] = ()
    trace: Tuple[Dict[str, Any], ...] = field(default=())

    @classmethod
    def start(cls, ideal: Union[Ideal, Sequence[Polynomial]]) -> "GlobalState":
        ideal = _as_exact_ideal(ideal)
        coordinates = tuple(Polynomial.variable(ideal.vars, i) for i in range(ideal.nvars))
        return cls(ideal, tuple(range(ideal.nvars)), coordinates=coordinates)

    @property
    def j(self) -> int:
        return len(self.invariant)

    @property
    def nvars(self) -> int:
        return self.ideal.nvars

    def frame(self) -> CoordinateFrame:
        degree = max(g.body.degree() for g in self.ideal.gens)
        return CoordinateFrame.identity(self.ideal.vars, max(degree, 1), self.slots, epoch=self.j)

    def brackets(self, counter: Optional[WorkCounter] = None) -> DerivativeBrackets:
        return DerivativeBrackets(self.ideal, self.frame(), counter)

    def adopt(self, contact: Polynomial) -> "GlobalState":
        """
        Сделать аффинно-линейную функцию contact координатой на позиции j.

        Заменяется переменная с наименьшей позицией >= j, входящая в contact.
        """
        linear = contact.linear_part()
        candidates = [p for p in range(self.j, self.nvars) if linear.get(self.slots[p], 0) != 0]
        if contact.degree() > 1 or not candidates:
            raise MathError("not a parameter at p")
        chosen = candidates[0]
        var = self.slots[chosen]
        variables = self.ideal.vars
        new_coordinate = Polynomial.variable(variables, var)
        # x_var = (u - (contact - c·x_var)) / c
        rest = contact - new_coordinate.scale(linear[var])
        inverse = (new_coordinate - rest).scale(1 / linear[var])
        images = {name: Polynomial.variable(variables, i) for i, name in enumerate(variables)}
        images[variables[var]] = inverse
        gens = [TruncatedSeries.exact_of(g.body.compose(images, variables)) for g in self.ideal.gens]

        originals = {name: poly for name, poly in zip(variables, self.coordinates)}
        in_original = contact.compose(originals, variables)
        coordinates = list(self.coordinates)
        coordinates[var] = in_original
        slots = list(self.slots)
        slots[self.j], slots[chosen] = slots[chosen], slots[self.j]
        return replace(self, ideal=self.ideal.with_generators(gens), slots=tuple(slots),
                       parameters=self.parameters + (in_original,), coordinates=tuple(coordinates))


def _restricted_max_orders(state: GlobalState, brackets: DerivativeBrackets
                           ) -> List[Tuple[Tuple[int, ...], Ideal, int]]:
    """(β', D[β']|_{V(x_j)}, maxord) для β' длины j с Δ < 1 и ненулевым ограничением."""
    result = []
    for prefix in simplex_points(state.invariant):
        restricted = brackets.restricted(prefix)
        order = max_order(restricted) if not restricted.is_zero else None
        if order is not None:
            result.append((prefix, restricted, order))
    return result


def stratum_ideal(state: GlobalState, b, counter: Optional[WorkCounter] = None, inclusive: bool = False,
                  brackets: Optional[DerivativeBrackets] = None) -> Ideal:
    """
    A(a₁..a_j; b) = Σ D[β] по β длины j+1 с Ξ(β) < b (при inclusive - с Ξ(β) <= b).

    Для β = (β', m): Ξ(β) < b ⟺ m < b(1 - Δ(β')). Порядок m ограничивается степенью
    D[β']|_{V(x_j)}: старшие производные уже не меняют идеал.
    """
    b = Fraction(b)
    brackets = brackets or state.brackets(counter)
    gens: List[TruncatedSeries] = []
    for prefix in simplex_points(state.invariant):
        restricted = brackets.restricted(prefix)
        if restricted.is_zero:
            continue
        room = b * (1 - delta(state.invariant, prefix))
        top = floor(room) if inclusive else ceil(room) - 1
        if top < 0:
            continue
        degree = max(g.body.degree() for g in restricted.gens if not g.is_known_zero)
        gens.extend(brackets.bracket(prefix + (min(top, degree),)).gens)
    return state.ideal.with_generators(gens)


def next_entry_global(state: GlobalState, counter: Optional[WorkCounter] = None
                      ) -> Tuple[Optional[Fraction], Optional[Polynomial]]:
    """
    Следующий элемент максимального инварианта: наименьшее c с Σ_{Ξ(β)<=c} D[β] = (1),
    и аффинно-линейный параметр максимального контакта.

    Returns:
        (значение, параметр); (None, None), если все D[β']|_{V(x_j)} нулевые (инвариант полон)

    Raises:
        MathError: если нет аффинно-линейного элемента максимального контакта
        GuardExceeded: задача больше настольного масштаба
    """
    brackets = state.brackets(counter)
    entries = _restricted_max_orders(state, brackets)
    if not entries:
        return None, None

    candidates = sorted({Fraction(m) / (1 - delta(state.invariant, prefix))
                         for prefix, _, order in entries for m in range(order + 1)})
    for value in candidates:
        stratum = stratum_ideal(state, value, counter, inclusive=True, brackets=brackets)
        if not is_unit_ideal(stratum.polynomials()):
            continue
        if value == 0:
            return value, None
        for prefix, _, order in entries:
            m = value * (1 - delta(state.invariant, prefix))
            if m.denominator != 1 or m < 1:
                continue
            basis = buchberger(brackets.bracket(prefix + (int(m) - 1,)).polynomials())
            for element in basis.generators:
                if element.degree() == 1:
                    logger.debug(f"Переворот страты при b={value}, β'={prefix}, параметр {element}")
                    return value, element
        raise MathError("no affine-linear maximal contact element")
    raise MathError("derivative ideals never became the unit ideal")


@dataclass
class GlobalInvariant:
    """Максимальный инвариант и его аффинно-линейные параметры (в исходных координатах)."""

    invariant: Tuple[Fraction, ...]
    parameters: Tuple[Polynomial, ...]
    trace: List[Dict[str, Any]]


def global_max_invariant(ideal: Union[Ideal, Sequence[Polynomial]],
                         counter: Optional[WorkCounter] = None) -> GlobalInvariant:
    """
    maxinv_X: a₁ = max_order, затем последовательные перевороты идеалов страт.

    Raises:
        MathError: для единичного идеала или без аффинно-линейного максимального контакта
        GuardExceeded: задача больше настольного масштаба
    """
    state = GlobalState.start(ideal)
    if state.ideal.is_zero:
        raise MathError("zero ideal has no associated centre")
    while state.j < state.nvars:
        value, contact = next_entry_global(state, counter)
        if value is None:
            break
        if value == 0:
            raise MathError("ideal has no zeros")
        record = {"step": state.j + 1, "a": value, "parameter": str(contact)}
        state = state.adopt(contact)
        state = replace(state, invariant=state.invariant + (value,), trace=state.trace + (record,))
    logger.info(f"Глобальный максимальный инвариант: {tuple(str(a) for a in state.invariant)}")
    return GlobalInvariant(state.invariant, state.parameters, list(state.trace))


def invariant_at_point(ideal: Union[Ideal, Sequence[Polynomial]], point: Sequence) -> Tuple[Fraction, ...]:
    """
    Инвариант ассоциированного центра в точке (Метод 2).

    Raises:
        MathError: "point not on the variety"
    """
    centre, _ = associated_centre_m2(ideal, point)
    return tuple(centre.invariant)
