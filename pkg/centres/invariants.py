"""
File: centres/invariants.py
Purpose:
    Числовая часть теории инвариантов: пре-инварианты, Δ и Ξ, маркировка,
    порядок на инвариантах, множество значений Γ, симплекс Σ.

Responsibilities:
    - PreInvariant и сентинел INFINITY
    - delta, xi, marking_of, compare_inv, gamma_member
    - simplex_points (мультииндексы с Δ < 1)
    - Предикаты числовой теоремы и леммы для проверочных наборов

Key Design Decisions:
    - +∞ - отдельный объект, а не большое число
    - Нулевой центр () больше любого непустого инварианта (дополнение +∞)
    - Вся арифметика на fractions.Fraction

Notes:
    - Модуль не зависит от многочленов и используется всеми методами
"""
from fractions import Fraction
from functools import cmp_to_key, total_ordering
from itertools import product
from math import ceil, gcd, lcm
from typing import Callable, Iterable, Iterator, List, Sequence, Tuple, Union

from utils.exceptions import InvariantViolation, MathError


@total_ordering
class _Infinity:
    """Сентинел +∞: больше любого рационального числа."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other) -> bool:
        return other is self

    def __lt__(self, other) -> bool:
        return False

    def __gt__(self, other) -> bool:
        return other is not self

    def __hash__(self) -> int:
        return hash("+inf")

    def __repr__(self) -> str:
        return "+inf"

    __str__ = __repr__


INFINITY = _Infinity()

Extended = Union[Fraction, _Infinity]


def _rational_le(a, b) -> bool:
    if b is INFINITY:
        return True
    if a is INFINITY:
        return False
    return a <= b


class PreInvariant(tuple):
    """
    Неубывающая последовательность положительных рациональных чисел.

    Пустая последовательность допускается как стартовое состояние (нулевой центр).
    """

    def __new__(cls, entries: Iterable = ()):
        values = tuple(Fraction(e) for e in entries)
        if any(v <= 0 for v in values):
            raise MathError(f"pre-invariant entries must be positive: {values}")
        if any(x > y for x, y in zip(values, values[1:])):
            raise MathError(f"pre-invariant must be non-decreasing: {values}")
        return super().__new__(cls, values)

    def __repr__(self) -> str:
        return "(" + ", ".join(str(v) for v in self) + ")"


def delta(a: Sequence[Fraction], beta: Sequence[int]) -> Fraction:
    """Δ(a; β) = Σ_{i≤j} β_i / a_i, j = len(a)."""
    if len(beta) < len(a):
        raise MathError("multi-index is shorter than the pre-invariant")
    return sum((Fraction(b) / Fraction(x) for b, x in zip(beta, a)), Fraction(0))


def xi(a: Sequence[Fraction], beta: Sequence[int]) -> Extended:
    """Ξ(a; β) = (Σ_{i>j} β_i) / (1 - Δ); +∞ при Δ >= 1."""
    if len(beta) < len(a) + 1:
        raise MathError("multi-index must be longer than the pre-invariant")
    d = delta(a, beta)
    if d >= 1:
        return INFINITY
    return Fraction(sum(beta[len(a):])) / (1 - d)


def marking_of(a: Sequence[Fraction]) -> Tuple[int, Tuple[int, ...]]:
    """
    Маркировка d и веса w_i = d / a_i.

    Returns:
        (d, веса)

    Raises:
        InvariantViolation: если веса не целые или их НОД не 1
    """
    values = [Fraction(x) for x in a]
    if not values:
        return 1, ()
    d = 1
    for value in values:
        d = lcm(d, value.numerator)
    weights = []
    for value in values:
        w = Fraction(d) / value
        if w.denominator != 1:
            raise InvariantViolation(f"non-integral weight for entry {value} and marking {d}")
        weights.append(int(w))
    common = 0
    for w in weights:
        common = gcd(common, w)
    if common != 1:
        raise InvariantViolation(f"weights {weights} are not coprime")
    return d, tuple(weights)


def compare_inv(u: Sequence[Fraction], v: Sequence[Fraction]) -> int:
    """
    Лексикографическое сравнение с дополнением +∞ (усеченные последовательности больше).

    Returns:
        -1, 0 или 1
    """
    for i in range(max(len(u), len(v))):
        x = u[i] if i < len(u) else INFINITY
        y = v[i] if i < len(v) else INFINITY
        if x == y:
            continue
        return -1 if _rational_le(x, y) else 1
    return 0


invariant_key = cmp_to_key(compare_inv)


def max_invariant(values: Iterable[Sequence[Fraction]]) -> Tuple[Fraction, ...]:
    return max((tuple(v) for v in values), key=invariant_key)


def simplex_points(a: Sequence[Fraction]) -> Iterator[Tuple[int, ...]]:
    """Все β длины len(a) с Δ(a; β) < 1, в порядке возрастания lex."""
    a = [Fraction(x) for x in a]
    if not a:
        yield ()
        return
    bounds = [ceil(x) for x in a]
    for beta in product(*(range(b) for b in bounds)):
        if delta(a, beta) < 1:
            yield beta


def gamma_member(a: Sequence[Fraction]) -> bool:
    """
    Принадлежность Γ: a_1 целое положительное; каждое следующее a_{j+1} >= a_j
    и a_{j+1}(1 - Δ(β)) - целое положительное для некоторого β с Δ < 1.
    """
    a = [Fraction(x) for x in a]
    if not a:
        return True
    if a[0].denominator != 1 or a[0] < 1:
        return False
    for j in range(1, len(a)):
        if a[j] < a[j - 1]:
            return False
        found = False
        for beta in simplex_points(a[:j]):
            value = a[j] * (1 - delta(a[:j], beta))
            if value.denominator == 1 and value >= 1:
                found = True
                break
        if not found:
            return False
    return True


def gamma_candidates(a: Sequence[Fraction], upper: Fraction) -> List[Fraction]:
    """Значения из Γ(a), продолжающие a, в отрезке [a_j, upper], по возрастанию."""
    a = [Fraction(x) for x in a]
    lower = a[-1] if a else Fraction(1)
    values = set()
    for beta in simplex_points(a):
        slack = 1 - delta(a, beta)
        m = 1
        while Fraction(m) / slack <= upper:
            value = Fraction(m) / slack
            if value >= lower:
                values.add(value)
            m += 1
    return sorted(values)


def prefix_dominated(gamma: Sequence[int], beta: Sequence[int]) -> bool:
    """Все частичные суммы γ не больше частичных сумм β."""
    left = right = 0
    for g, b in zip(gamma, beta):
        left += g
        right += b
        if left > right:
            return False
    return True


def numerical_theorem_holds(b: Sequence[Fraction], beta: Sequence[int], gamma: Sequence[int],
                            xi_fn: Callable = None) -> bool:
    """
    Для β, γ длины j+1 с частичными суммами γ не больше частичных сумм β
    и пре-инварианта b длины j: Ξ(γ) <= Ξ(β) или Ξ(γ) < b_j.

    xi_fn подменяет Ξ (отрицательный контроль validate).

    Raises:
        MathError: если γ не доминируется β по частичным суммам
    """
    if not prefix_dominated(gamma, beta):
        raise MathError("gamma is not prefix-dominated by beta")
    xi_fn = xi_fn or xi
    xi_gamma = xi_fn(b, gamma)
    xi_beta = xi_fn(b, beta)
    if _rational_le(xi_gamma, xi_beta):
        return True
    return xi_gamma is not INFINITY and xi_gamma < Fraction(b[-1])


def numerical_lemma_holds(b: Sequence[Fraction], beta: Sequence[int], xi_fn: Callable = None) -> bool:
    """Если Σβ > Ξ(b; β), то Σβ < b_j."""
    total = Fraction(sum(beta))
    value = (xi_fn or xi)(b, beta)
    if value is INFINITY or total <= value:
        return True
    return total < Fraction(b[-1])
