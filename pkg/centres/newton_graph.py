"""
File: centres/newton_graph.py
Purpose:
    Множества Ньютона идеала в точке, их минимальные элементы и графический тест допустимости.

Responsibilities:
    - newton_set: антицепь минимальных мультииндексов по генераторам
    - min_xi_over_newton: следующий элемент инварианта и детерминированный свидетель
    - hyperplane_below: лежит ли гиперплоскость Σβ_i/a_i = 1 под множеством Ньютона

Key Design Decisions:
    - Мультииндексы хранятся в порядке позиций системы координат (принятые параметры первыми)
    - Для усеченных генераторов ответ выдается только если он сертифицирован порядком T,
      иначе TruncationError ("raise truncation")

Notes:
    - Минимизация Ξ только по антицепи корректна: Ξ монотонна по покомпонентному порядку
"""
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Optional, Sequence, Tuple, Union

from algebra.ideal import Ideal
from algebra.polynomial import MultiIndex, grlex_key
from algebra.series import TruncatedSeries
from centres.invariants import INFINITY, Extended, delta, xi
from utils.exceptions import InvariantViolation, MathError, TruncationError
from utils.logger import logger


@dataclass(frozen=True)
class NewtonSet:
    """
    Множество Ньютона, заданное минимальными элементами.

    Attributes:
        minimal_elements: Антицепь мультииндексов (в порядке позиций), отсортирована grlex
        certified_degree: Все элементы полной степени <= certified_degree известны (None - точно)
    """

    minimal_elements: Tuple[MultiIndex, ...]
    certified_degree: Optional[int] = None

    @property
    def exact(self) -> bool:
        return self.certified_degree is None

    @property
    def nvars(self) -> int:
        return len(self.minimal_elements[0]) if self.minimal_elements else 0

    def contains(self, beta: MultiIndex) -> bool:
        """Принадлежность β верхнему замыканию антицепи."""
        return any(all(m <= b for m, b in zip(minimal, beta)) for minimal in self.minimal_elements)

    def complete_to(self, degree: int) -> bool:
        return self.certified_degree is None or degree <= self.certified_degree


def minimal_elements(exponents) -> Tuple[MultiIndex, ...]:
    """Антицепь минимальных элементов конечного множества мультииндексов."""
    result = []
    for beta in sorted(set(exponents), key=grlex_key):
        if not any(all(m <= b for m, b in zip(kept, beta)) for kept in result):
            result.append(beta)
    return tuple(result)


def newton_set(generators: Union[Ideal, Sequence[TruncatedSeries]],
               slots: Optional[Sequence[int]] = None) -> NewtonSet:
    """
    Множество Ньютона идеала по его генераторам.

    Любой моном x^γ·g_i лежит в идеале, а носитель любого элемента идеала содержится
    в объединении support(g_i) + Z^n, поэтому достаточно носителей генераторов.

    Args:
        generators: Идеал или генераторы (ряды в текущей системе координат)
        slots: Порядок позиций (slots[p] - индекс переменной на позиции p)

    Returns:
        NewtonSet

    Raises:
        MathError: "empty Newton set" для нулевого идеала
        TruncationError: если все генераторы обнулились усечением
    """
    gens = generators.gens if isinstance(generators, Ideal) else tuple(generators)
    gens = [TruncatedSeries.coerce(g) for g in gens]
    if not gens or all(g.is_known_zero for g in gens):
        raise MathError("empty Newton set")

    if slots is None:
        slots = range(gens[0].body.nvars)
    slots = tuple(slots)

    exponents = []
    for g in gens:
        for beta in g.body.support():
            exponents.append(tuple(beta[var] for var in slots))
    inexact = [g.trunc_order for g in gens if not g.exact]
    certified = min(inexact) if inexact else None
    if not exponents:
        raise TruncationError()
    return NewtonSet(minimal_elements(exponents), certified)


def min_xi_over_newton(a: Sequence[Fraction], newton: NewtonSet) -> Tuple[Fraction, MultiIndex]:
    """
    Минимум Ξ(a; β) по минимальным элементам с Δ(β) < 1.

    Args:
        a: Пре-инвариант длины j
        newton: Множество Ньютона

    Returns:
        (значение, свидетель β - наименьший в grlex среди минимизаторов)

    Raises:
        TruncationError: если минимум не сертифицирован текущим T
    """
    a = tuple(Fraction(x) for x in a)
    best: Extended = INFINITY
    witness = None
    for beta in newton.minimal_elements:
        if delta(a, beta) >= 1:
            continue
        value = xi(a, beta)
        if value < best or (value == best and witness is not None and grlex_key(beta) < grlex_key(witness)):
            best, witness = value, beta

    if witness is None:
        if newton.exact:
            raise InvariantViolation("no multi-index with delta below one")
        raise TruncationError()

    # β с Ξ(β) < c имеет |β| < Σa + c, значит при T >= ⌈Σa + c⌉ он уже виден
    if not newton.complete_to(ceil(sum(a) + best)):
        logger.debug(f"Минимум Ξ={best} не сертифицирован при T={newton.certified_degree}")
        raise TruncationError()
    return best, witness


def weighted_sum(a: Sequence[Fraction], beta: MultiIndex) -> Fraction:
    """λ_a(β) = Σ_{i<=k} β_i / a_i."""
    return sum((Fraction(b) / Fraction(x) for b, x in zip(beta, a)), Fraction(0))


def hyperplane_below(a: Sequence[Fraction], newton: NewtonSet) -> bool:
    """
    Лежит ли гиперплоскость H(a) под множеством Ньютона (все минимальные β с λ_a(β) >= 1).

    Raises:
        TruncationError: если ответ не определяется видимой частью
    """
    a = tuple(Fraction(x) for x in a)
    if any(weighted_sum(a, beta) < 1 for beta in newton.minimal_elements):
        return False
    if newton.exact:
        return True
    # при k = n невидимые β имеют |β| > T >= Σa, откуда λ_a(β) > 1
    if a and len(a) == newton.nvars and newton.complete_to(ceil(sum(a))):
        return True
    raise TruncationError()
