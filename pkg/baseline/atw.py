"""
File: baseline/atw.py
Purpose:
    Базовый алгоритм с коэффициентными идеалами C(I,b) = Σ_{i<b} (D^{≤i}I)^{b!/(b-i)}
    и оценка размера симплекса σ(a).

Responsibilities:
    - PoweredIdealSum: узел дерева вложенных коэффициентных идеалов (без раскрытия степеней)
    - CoefficientEvaluator: порядок в точке (order-only) и полная материализация (full)
    - coefficient_ideal / atw_centre: последовательность b_j, a_j, параметры, трасса
    - simplex_size / sigma_bound

Key Design Decisions:
    - Показатели хранятся как точные целые Python (b₃ = 36·29! на x⁴+y⁵+z⁶)
    - Режим order-only считает ord через цепочки "производные до порядка t, затем ограничение":
      для листа ответ точный, для степеней используется нижняя оценка по правилу Лейбница
    - Режим full материализует идеалы и отказывает при показателе выше EXPONENT_CAP
    - Все идеалы дерева выражаются в текущей системе координат (листья пересчитываются при замене)

Notes:
    - Счетчик "exponent_sum" (сумма показателей всех слагаемых) - прокси работы для bench
    - Пример сравнения в исходных расчетах обозначен как C(I,3), но использует показатели 4!/(4-i);
      здесь используется b = b₁ = 4
"""
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from itertools import accumulate, combinations, product
from math import factorial, prod
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from algebra.ideal import Ideal, WorkCounter, derive_ideal, prune_generators, restrict_to_coordinate_slice
from algebra.polynomial import MultiIndex, Polynomial, grlex_key
from algebra.series import CoordinateFrame, TruncatedSeries
from centres.invariants import INFINITY, Extended
from centres.method_one import prepare_ideal, run_with_deepening
from centres.method_two import maximal_contact
from centres.weighting import MarkedCentre, initial_truncation
from config.constants import ATW_MODE_FULL, ATW_MODE_ORDER_ONLY, ATW_MODES
from config.settings import settings
from utils.exceptions import ExponentOverflow, GuardExceeded, InvariantViolation, MathError, TruncationError
from utils.logger import logger

# Стадия цепочки: (бюджет производных, убиваемая позиция или None)
Stage = Tuple[int, Optional[int]]
Chain = Tuple[Stage, ...]


@dataclass(frozen=True)
class IdealLeaf:
    """Исходный идеал (генераторы в локальных координатах точки)."""

    ideal: Ideal


@dataclass(frozen=True)
class PoweredIdealSum:
    """
    Σ_{i<b} ((D^{≤i} base)|_{V(x_position)})^{b!/(b-i)}.

    Attributes:
        base: Идеал, от которого берется коэффициентный идеал
        b: Параметр b >= 1
        position: Позиция координаты, на которую ограничиваются слагаемые (None - без ограничения)
        mode: full | order-only
    """

    base: Union[IdealLeaf, "PoweredIdealSum"]
    b: int
    position: Optional[int] = None
    mode: str = ATW_MODE_ORDER_ONLY

    @cached_property
    def b_factorial(self) -> int:
        return factorial(self.b)

    def exponent(self, i: int) -> int:
        return self.b_factorial // (self.b - i)

    @property
    def exponents(self) -> Tuple[int, ...]:
        return tuple(self.exponent(i) for i in range(self.b))

    @property
    def exponent_sum(self) -> int:
        return sum(self.exponents)


Node = Union[IdealLeaf, PoweredIdealSum]


@dataclass(frozen=True)
class Witness:
    """Моном листа, на котором достигается порядок."""

    generator: int
    beta: MultiIndex
    chain: Chain


def _add(u: Extended, v: Extended) -> Extended:
    if u is INFINITY or v is INFINITY:
        return INFINITY
    return u + v


def _times(count: int, value: Extended) -> Extended:
    if count == 0:
        return 0
    if value is INFINITY:
        return INFINITY
    return count * value


def _check_exponents(node: PoweredIdealSum):
    if node.b_factorial > settings.EXPONENT_CAP:
        logger.error(f"Показатель {node.b}! превышает предел {settings.EXPONENT_CAP}")
        raise ExponentOverflow()


def coefficient_ideal(ideal: Union[Ideal, Sequence[Polynomial], Node], b: int, mode: str = ATW_MODE_ORDER_ONLY,
                      position: Optional[int] = None) -> PoweredIdealSum:
    """
    b-й коэффициентный идеал.

    Args:
        ideal: Идеал (или узел дерева для вложенных конструкций)
        b: b >= 1
        mode: full | order-only
        position: Позиция координаты для ограничения слагаемых

    Returns:
        PoweredIdealSum

    Raises:
        ExponentOverflow: в режиме full при показателе выше EXPONENT_CAP
    """
    if b < 1:
        raise MathError("coefficient ideal needs b >= 1")
    if mode not in ATW_MODES:
        raise MathError(f"unknown coefficient ideal mode: {mode}")
    if not isinstance(ideal, (IdealLeaf, PoweredIdealSum)):
        ideal = IdealLeaf(ideal if isinstance(ideal, Ideal) else Ideal.of(list(ideal)))
    node = PoweredIdealSum(ideal, b, position, mode)
    if mode == ATW_MODE_FULL:
        _check_exponents(node)
    return node


class CoefficientEvaluator:
    """
    Вычисления над деревом коэффициентных идеалов в фиксированной системе координат.

    Запрос query(node, chain) возвращает ord_0 идеала, полученного из node применением
    стадий chain (изнутри наружу): D^{≤t} по незанятым направлениям, затем ограничение на V(x_p).
    """

    def __init__(self, frame: CoordinateFrame, counter: Optional[WorkCounter] = None):
        self.frame = frame
        self.counter = counter
        self._leaves: Dict[int, Tuple[TruncatedSeries, ...]] = {}
        self._queries: Dict[Tuple[int, Chain], Tuple[Extended, Optional[Witness]]] = {}
        self._materialized: Dict[int, Ideal] = {}

    def leaf_generators(self, leaf: IdealLeaf) -> Tuple[TruncatedSeries, ...]:
        cached = self._leaves.get(id(leaf))
        if cached is None:
            cached = tuple(self.frame.express(g) for g in leaf.ideal.gens if not g.is_known_zero)
            self._leaves[id(leaf)] = cached
        return cached

    # ------------------------------------------------------------------
    # order-only
    # ------------------------------------------------------------------

    def order(self, node: Node) -> Tuple[Extended, Optional[Witness]]:
        """ord_0 идеала узла и свидетель."""
        return self.query(node, ())

    def query(self, node: Node, chain: Chain) -> Tuple[Extended, Optional[Witness]]:
        key = (id(node), chain)
        cached = self._queries.get(key)
        if cached is not None:
            return cached
        if isinstance(node, IdealLeaf):
            result = self._leaf_query(node, chain)
        else:
            result = self._sum_query(node, chain)
        self._queries[key] = result
        return result

    def _leaf_query(self, leaf: IdealLeaf, chain: Chain) -> Tuple[Extended, Optional[Witness]]:
        # моном β выживает, если убиваемые показатели покрываются бюджетами стадий до их убийства;
        # остаток бюджета уходит на свободные переменные
        budgets = list(accumulate(t for t, _ in chain))
        total = budgets[-1] if budgets else 0
        killed = {p for _, p in chain if p is not None}

        best: Extended = INFINITY
        witness = None
        bound: Extended = INFINITY
        for index, g in enumerate(self.leaf_generators(leaf)):
            if not g.exact:
                bound = min(bound, g.trunc_order + 1 - total)
            for exponent in g.body.support():
                beta = self.frame.positional_exponent(exponent)
                demand = 0
                feasible = True
                for (_, p), budget in zip(chain, budgets):
                    if p is not None:
                        demand += beta[p]
                    if demand > budget:
                        feasible = False
                        break
                if not feasible:
                    continue
                free = sum(b for pos, b in enumerate(beta) if pos not in killed)
                value = free - min(free, total - demand)
                if value < best or (value == best and (index, grlex_key(beta)) < (witness.generator,
                                                                                   grlex_key(witness.beta))):
                    best, witness = value, Witness(index, beta, chain)

        if best is not INFINITY and best <= bound:
            return best, witness
        if bound is INFINITY:
            return best, witness
        raise TruncationError()

    def _sum_query(self, node: PoweredIdealSum, chain: Chain) -> Tuple[Extended, Optional[Witness]]:
        best: Extended = INFINITY
        witness = None
        for i in range(node.b):
            value, found = self._power_query(node, i, chain)
            if value < best:
                best, witness = value, found
        return best, witness

    def _power_query(self, node: PoweredIdealSum, i: int, chain: Chain) -> Tuple[Extended, Optional[Witness]]:
        """
        Нижняя оценка ord для ((D^{≤i} base)|_{V(x_p)})^e под цепочкой chain.

        Бюджеты внешних стадий распределяются между e множителями; k множителей получают
        ненулевые части, остальные считаются с нулевыми бюджетами.
        """
        exponent = node.exponent(i)
        stage = ((i, node.position),)
        positions = tuple(p for _, p in chain)
        capacity = tuple(t for t, _ in chain)

        def factor(budget: Tuple[int, ...]):
            return self.query(node.base, stage + tuple(zip(budget, positions)))

        zero_value, zero_witness = factor((0,) * len(capacity))
        if not any(capacity):
            return _times(exponent, zero_value), zero_witness

        lattice = list(product(*(range(t + 1) for t in capacity)))
        nonzero = [v for v in lattice if any(v)]
        parts = min(exponent, sum(capacity))
        if parts * len(lattice) * len(nonzero) > settings.PROFILE_CAP:
            logger.error(f"Таблица порядков {len(lattice)}x{parts} превышает PROFILE_CAP")
            raise GuardExceeded()

        values = {v: factor(v) for v in nonzero}
        # layer[c] - минимум суммы по k ненулевым частям с суммой <= c
        layer = {c: 0 for c in lattice}
        best = _times(exponent, zero_value)
        best_witness = zero_witness
        for k in range(1, parts + 1):
            updated = {}
            for c in lattice:
                candidate: Extended = INFINITY
                for v in nonzero:
                    if all(x <= y for x, y in zip(v, c)):
                        rest = tuple(y - x for x, y in zip(v, c))
                        candidate = min(candidate, _add(values[v][0], layer[rest]))
                updated[c] = candidate
            layer = updated
            total = _add(_times(exponent - k, zero_value), layer[capacity])
            if total < best:
                best = total
                if exponent > k:
                    best_witness = zero_witness
                else:
                    best_witness = values[min(nonzero, key=lambda v: values[v][0])][1]
        return best, best_witness

    # ------------------------------------------------------------------
    # full
    # ------------------------------------------------------------------

    def materialize(self, node: Node) -> Ideal:
        """Раскрыть дерево в явный идеал (только при показателях <= EXPONENT_CAP)."""
        cached = self._materialized.get(id(node))
        if cached is not None:
            return cached
        if isinstance(node, IdealLeaf):
            result = Ideal.of(self.leaf_generators(node), self.frame.vars)
        else:
            _check_exponents(node)
            base = self.materialize(node.base)
            start = 0 if node.position is None else node.position
            directions = [self.frame.var_at(p) for p in range(start, self.frame.nvars)]
            gens: List[TruncatedSeries] = []
            for i in range(node.b):
                derived = derive_ideal(base, i, self.counter, directions)
                if node.position is not None:
                    derived = restrict_to_coordinate_slice(derived, [self.frame.var_at(node.position)])
                gens.extend(ideal_power(derived, node.exponent(i)).gens)
            result = base.with_generators(prune_generators(gens))
        self._materialized[id(node)] = result
        return result


def ideal_product(first: Ideal, second: Ideal) -> Ideal:
    if len(first.gens) * len(second.gens) > settings.PROFILE_CAP:
        raise GuardExceeded()
    gens = [f * g for f in first.gens for g in second.gens]
    return first.with_generators(prune_generators(gens))


def ideal_power(ideal: Ideal, exponent: int) -> Ideal:
    """I^e возведением в квадрат с прореживанием генераторов."""
    if exponent < 1:
        raise MathError("ideal power needs a positive exponent")
    if not ideal.gens:
        return ideal
    result = None
    square = ideal
    while exponent:
        if exponent & 1:
            result = square if result is None else ideal_product(result, square)
        exponent >>= 1
        if exponent:
            square = ideal_product(square, square)
    return result


@dataclass
class AtwResult:
    """
    Результат базового алгоритма.

    Attributes:
        b: Порядки b_j коэффициентных идеалов
        a: a_j = b_j / Π_{i<j} (b_i - 1)!
        centre: Маркированный центр (параметры - элементы максимального контакта)
        trace: Записи по уровням
        mode: Режим вычисления
        counter: Счетчики работы
    """

    b: Tuple[int, ...]
    a: Tuple[Fraction, ...]
    centre: MarkedCentre
    trace: List[Dict[str, Any]] = field(default_factory=list)
    mode: str = ATW_MODE_ORDER_ONLY
    counter: WorkCounter = field(default_factory=WorkCounter)


def parameter_from_witness(evaluator: CoefficientEvaluator, leaf: IdealLeaf, witness: Witness) -> TruncatedSeries:
    """
    Элемент порядка 1 по мономиальному свидетелю: (∂^{β-e_l} g)|_{V(убитые)}.

    Raises:
        MathError: "not a maximal-contact ideal"
    """
    killed = {p for _, p in witness.chain if p is not None}
    free = [p for p, b in enumerate(witness.beta) if b > 0 and p not in killed]
    if not free:
        raise MathError("not a maximal-contact ideal")
    reduced = list(witness.beta)
    reduced[free[0]] -= 1
    frame = evaluator.frame
    g = evaluator.leaf_generators(leaf)[witness.generator]
    h = g.derivative(frame.variable_exponent(tuple(reduced)))
    h = h.substitute_zero([frame.var_at(p) for p in killed])
    if h.constant_term() != 0 or not h.body.linear_part() or h.trunc_order < 1:
        raise MathError("not a maximal-contact ideal")
    return h


def _run_atw(ideal: Ideal, point: Tuple[Fraction, ...], local: Sequence[Polynomial], mode: str,
             trunc_order: int, counter: WorkCounter) -> AtwResult:
    frame = CoordinateFrame.identity(ideal.vars, trunc_order)
    leaf = IdealLeaf(Ideal.of(list(local), ideal.vars))
    level: Node = leaf
    b: List[int] = []
    a: List[Fraction] = []
    trace: List[Dict[str, Any]] = []
    scale = 1
    while len(b) < ideal.nvars:
        j = len(b)
        evaluator = CoefficientEvaluator(frame, counter)
        if mode == ATW_MODE_FULL:
            materialized = evaluator.materialize(level)
            value, certified = materialized.order_at_origin()
            if not certified:
                raise TruncationError()
            if value is None:
                break
        else:
            value, witness = evaluator.order(level)
            if value is INFINITY:
                break
        if value == 0:
            raise InvariantViolation("coefficient ideal is a unit at the point")

        if mode == ATW_MODE_FULL:
            directions = [frame.var_at(p) for p in range(j, frame.nvars)]
            param = maximal_contact(derive_ideal(materialized, value - 1, counter, directions))
        else:
            param = parameter_from_witness(evaluator, leaf, witness)

        entry = Fraction(value, scale)
        frame, position = frame.adopt(param, j)
        b.append(value)
        a.append(entry)
        trace.append({
            "level": j + 1,
            "b": value,
            "a": entry,
            "parameter": str(param),
            "position": position,
            "exponent_sum": level.exponent_sum if isinstance(level, PoweredIdealSum) else 0,
        })
        logger.debug(f"ATW, уровень {j + 1}: b={value}, a={entry}, параметр {param}")

        if len(b) == ideal.nvars:
            break
        if value > settings.PROFILE_CAP:
            raise GuardExceeded()
        level = coefficient_ideal(level, value, mode, position=j)
        counter.add("exponent_sum", level.exponent_sum)
        scale *= factorial(value - 1)

    params = [frame.coordinate_in_original(p) for p in range(len(b))]
    centre = MarkedCentre.from_local(ideal.vars, params, a, point, frame)
    return AtwResult(tuple(b), tuple(a), centre, trace, mode, counter)


def atw_centre(ideal: Union[Ideal, Sequence[Polynomial]], point: Optional[Sequence] = None,
               mode: str = ATW_MODE_ORDER_ONLY, trunc_cap: Optional[int] = None,
               counter: Optional[WorkCounter] = None) -> AtwResult:
    """
    Центр базового алгоритма: I[1] = I, I[j+1] = C(I[j], b_j)|_{V(x_j)}, b_j = ord_p I[j].

    Args:
        ideal: Идеал
        point: Точка (по умолчанию начало координат)
        mode: order-only (по умолчанию) или full
        trunc_cap: Предел порядка усечения
        counter: Счетчик работы

    Returns:
        AtwResult

    Raises:
        ExponentOverflow: в режиме full, если показатель превысил EXPONENT_CAP
    """
    if mode not in ATW_MODES:
        raise MathError(f"unknown coefficient ideal mode: {mode}")
    ideal, point, local = prepare_ideal(ideal, point)
    counter = counter if counter is not None else WorkCounter()
    try:
        result = run_with_deepening(lambda order: _run_atw(ideal, point, local, mode, order, counter),
                                    initial_truncation(local), trunc_cap)
    except ExponentOverflow:
        logger.error("ATW: переполнение показателя в режиме full")
        raise
    logger.info(f"ATW ({mode}): b={tuple(result.b)}, a={tuple(str(x) for x in result.a)}")
    return result


def simplex_size(a: Sequence[Fraction]) -> int:
    """σ(a) = #{β : Σ β_i/a_i < 1}, рекурсивным перебором."""
    a = [Fraction(x) for x in a]

    def count(index: int, slack: Fraction) -> int:
        if index == len(a):
            return 1
        total = 0
        beta = 0
        while Fraction(beta) / a[index] < slack:
            total += count(index + 1, slack - Fraction(beta) / a[index])
            beta += 1
        return total

    return count(0, Fraction(1))


def sigma_bound(a: Sequence[Fraction]) -> Fraction:
    """Σ_{A ⊆ {1..j}} Π_{l∈A} a_l / |A|!."""
    a = [Fraction(x) for x in a]
    total = Fraction(0)
    for size in range(len(a) + 1):
        for subset in combinations(a, size):
            total += Fraction(prod(subset, start=Fraction(1))) / factorial(size)
    return total
