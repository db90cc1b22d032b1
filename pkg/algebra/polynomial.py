"""
File: algebra/polynomial.py
Purpose:
    Точная разреженная многочленная арифметика над Q поверх sympy PolyRing.

Responsibilities:
    - Тип Polynomial: упорядоченные имена переменных + элемент кольца QQ[vars]
    - Производные, сдвиг в начало координат, подстановки, усечение
    - Детерминированная печать в grlex-порядке (обратимая через parser)

Key Design Decisions:
    - Коэффициенты хранятся в QQ sympy; наружу отдаются как fractions.Fraction
    - Мультииндексы - кортежи int длины len(vars), позиции совпадают с порядком переменных пользователя
    - Кольца кэшируются sympy, поэтому создание Polynomial дешевое

Notes:
    - Все значения неизменяемы
"""
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import Symbol
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

from utils.exceptions import MathError

MultiIndex = Tuple[int, ...]
Scalar = Union[int, Fraction]


@lru_cache(maxsize=None)
def polynomial_ring(variables: Tuple[str, ...], order=grlex) -> PolyRing:
    """Кольцо QQ[variables] с заданным мономиальным порядком."""
    return PolyRing(tuple(Symbol(name) for name in variables), QQ, order)


def to_fraction(value) -> Fraction:
    """Перевести элемент QQ (или int/Fraction) в Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(int(value.numerator), int(value.denominator))


def to_domain(value: Scalar):
    """Перевести int/Fraction в элемент QQ."""
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def grlex_key(beta: MultiIndex) -> Tuple[int, MultiIndex]:
    """Ключ graded-lex: сначала полная степень, затем лексикографически."""
    return (sum(beta), beta)


def format_coefficient(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Polynomial:
    """
    Многочлен с рациональными коэффициентами от упорядоченного набора переменных.

    Attributes:
        vars: Кортеж имен переменных (позиционный, задает слоты мультииндексов)
        element: Элемент sympy PolyRing (QQ, grlex)
    """

    __slots__ = ("vars", "element")

    def __init__(self, variables: Sequence[str], element=None):
        self.vars: Tuple[str, ...] = tuple(variables)
        ring = polynomial_ring(self.vars)
        if element is None:
            element = ring.zero
        elif element.ring is not ring:
            element = ring.from_dict(dict(element))
        self.element = element

    # ------------------------------------------------------------------
    # Конструкторы
    # ------------------------------------------------------------------

    @classmethod
    def from_terms(cls, variables: Sequence[str], terms: Mapping[MultiIndex, Scalar]) -> "Polynomial":
        ring = polynomial_ring(tuple(variables))
        data = {}
        for beta, coeff in terms.items():
            if len(beta) != ring.ngens:
                raise MathError(f"multi-index {beta} does not match {len(variables)} variables")
            if coeff:
                data[tuple(beta)] = to_domain(coeff)
        return cls(variables, ring.from_dict(data) if data else ring.zero)

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls(variables)

    @classmethod
    def constant(cls, variables: Sequence[str], value: Scalar) -> "Polynomial":
        return cls.from_terms(variables, {(0,) * len(variables): value})

    @classmethod
    def monomial(cls, variables: Sequence[str], beta: MultiIndex, value: Scalar = 1) -> "Polynomial":
        return cls.from_terms(variables, {tuple(beta): value})

    @classmethod
    def variable(cls, variables: Sequence[str], which: Union[int, str]) -> "Polynomial":
        index = variables.index(which) if isinstance(which, str) else which
        beta = tuple(1 if i == index else 0 for i in range(len(variables)))
        return cls.monomial(variables, beta)

    # ------------------------------------------------------------------
    # Доступ к термам
    # ------------------------------------------------------------------

    @property
    def ring(self) -> PolyRing:
        return self.element.ring

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def terms(self) -> Dict[MultiIndex, Fraction]:
        """Словарь мультииндекс -> коэффициент в порядке убывания grlex."""
        return {beta: to_fraction(coeff) for beta, coeff in
                sorted(self.element.items(), key=lambda item: grlex_key(item[0]), reverse=True)}

    def iter_terms(self) -> Iterator[Tuple[MultiIndex, Fraction]]:
        for beta, coeff in self.element.items():
            yield beta, to_fraction(coeff)

    def support(self) -> set:
        return set(self.element.keys())

    def coefficient(self, beta: MultiIndex) -> Fraction:
        return to_fraction(self.element.get(tuple(beta), QQ.zero))

    @property
    def is_zero(self) -> bool:
        return not self.element

    def degree(self) -> int:
        """Полная степень (-1 для нулевого многочлена)."""
        return max((sum(beta) for beta in self.element.keys()), default=-1)

    def order(self) -> Optional[int]:
        """Наименьшая полная степень термов (None для нуля)."""
        return min((sum(beta) for beta in self.element.keys()), default=None)

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.nvars)

    def linear_part(self) -> Dict[int, Fraction]:
        """Коэффициенты при переменных (индекс -> коэффициент), только ненулевые."""
        result = {}
        for beta, coeff in self.element.items():
            if sum(beta) == 1:
                result[beta.index(1)] = to_fraction(coeff)
        return result

    def is_monomial(self) -> bool:
        return len(self.element) == 1

    def is_homogeneous_variable(self) -> Optional[int]:
        """Индекс переменной, если многочлен равен ровно x_i, иначе None."""
        if len(self.element) != 1:
            return None
        (beta, coeff), = self.element.items()
        if sum(beta) == 1 and coeff == QQ.one:
            return beta.index(1)
        return None

    # ------------------------------------------------------------------
    # Арифметика
    # ------------------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.vars != self.vars:
                raise MathError(f"variable mismatch: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.vars, self.element + other.element)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.vars, self.element - other.element)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.vars, self.element * other.element)

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial(self.vars, -self.element)

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise MathError("negative exponent")
        return Polynomial(self.vars, self.element ** exponent)

    def scale(self, value: Scalar) -> "Polynomial":
        return Polynomial(self.vars, self.element * to_domain(value))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.vars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.vars == other.vars and self.element == other.element

    def __hash__(self) -> int:
        return hash((self.vars, frozenset(self.element.items())))

    # ------------------------------------------------------------------
    # Дифференцирование и подстановки
    # ------------------------------------------------------------------

    def diff(self, index: int) -> "Polynomial":
        if not 0 <= index < self.nvars:
            raise MathError(f"variable index {index} out of range")
        return Polynomial(self.vars, self.element.diff(self.ring.gens[index]))

    def derivative(self, beta: MultiIndex) -> "Polynomial":
        """Итерированная производная ∂^β."""
        if len(beta) != self.nvars:
            raise MathError(f"multi-index {beta} does not match {self.nvars} variables")
        element = self.element
        for index, count in enumerate(beta):
            for _ in range(count):
                if not element:
                    return Polynomial(self.vars, element)
                element = element.diff(self.ring.gens[index])
        return Polynomial(self.vars, element)

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.nvars:
            raise MathError("point dimension does not match variables")
        values = [Fraction(v) for v in point]
        total = Fraction(0)
        for beta, coeff in self.element.items():
            term = to_fraction(coeff)
            for value, exponent in zip(values, beta):
                if exponent:
                    term *= value ** exponent
            total += term
        return total

    def translate(self, point: Sequence[Scalar]) -> "Polynomial":
        """g(x) = f(x + p)."""
        if len(point) != self.nvars:
            raise MathError("point dimension does not match variables")
        if all(Fraction(v) == 0 for v in point):
            return self
        gens = self.ring.gens
        images = [(gens[i], gens[i] + to_domain(v)) for i, v in enumerate(point) if Fraction(v) != 0]
        return Polynomial(self.vars, self.element.compose(images))

    def substitute_zero(self, indices: Iterable[int]) -> "Polynomial":
        """Подставить 0 вместо переменных с данными индексами."""
        killed = set(indices)
        if not killed:
            return self
        data = {beta: coeff for beta, coeff in self.element.items()
                if not any(beta[i] for i in killed)}
        return Polynomial(self.vars, self.ring.from_dict(data) if data else self.ring.zero)

    def truncate(self, order: int) -> "Polynomial":
        """Отбросить термы полной степени > order."""
        data = {beta: coeff for beta, coeff in self.element.items() if sum(beta) <= order}
        if len(data) == len(self.element):
            return self
        return Polynomial(self.vars, self.ring.from_dict(data) if data else self.ring.zero)

    def with_vars(self, variables: Sequence[str]) -> "Polynomial":
        """Перенести многочлен в кольцо с другим набором (или порядком) переменных."""
        variables = tuple(variables)
        if variables == self.vars:
            return self
        positions = {name: i for i, name in enumerate(variables)}
        data = {}
        for beta, coeff in self.element.items():
            target = [0] * len(variables)
            for name, exponent in zip(self.vars, beta):
                if exponent:
                    if name not in positions:
                        raise MathError(f"variable {name} is missing from {variables}")
                    target[positions[name]] = exponent
            data[tuple(target)] = coeff
        ring = polynomial_ring(variables)
        return Polynomial(variables, ring.from_dict(data) if data else ring.zero)

    def compose(self, images: Mapping[str, "Polynomial"], target_vars: Sequence[str],
                truncate_at: Optional[int] = None) -> "Polynomial":
        """
        Подстановка x_i -> images[x_i] (многочлены от target_vars).

        Args:
            images: Образы переменных; должны покрывать все переменные, входящие в многочлен
            target_vars: Переменные результата
            truncate_at: Если задано, промежуточные произведения усекаются по полной степени

        Returns:
            Многочлен от target_vars
        """
        target_vars = tuple(target_vars)
        ring = polynomial_ring(target_vars)
        power_cache: Dict[Tuple[int, int], object] = {}

        def cut(element):
            if truncate_at is None:
                return element
            data = {beta: c for beta, c in element.items() if sum(beta) <= truncate_at}
            return ring.from_dict(data) if data else ring.zero

        def power(index: int, exponent: int):
            key = (index, exponent)
            if key not in power_cache:
                if exponent == 1:
                    image = images[self.vars[index]]
                    power_cache[key] = cut(image.with_vars(target_vars).element)
                else:
                    half = exponent // 2
                    value = cut(power(index, half) * power(index, exponent - half))
                    power_cache[key] = value
            return power_cache[key]

        result = ring.zero
        for beta, coeff in self.element.items():
            term = ring.one * coeff
            for index, exponent in enumerate(beta):
                if exponent:
                    term = cut(term * power(index, exponent))
                    if not term:
                        break
            result += term
        return Polynomial(target_vars, result)

    # ------------------------------------------------------------------
    # Печать
    # ------------------------------------------------------------------

    def format_monomial(self, beta: MultiIndex) -> str:
        parts = []
        for name, exponent in zip(self.vars, beta):
            if exponent == 1:
                parts.append(name)
            elif exponent > 1:
                parts.append(f"{name}^{exponent}")
        return "*".join(parts)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        pieces: List[str] = []
        for beta, coeff in self.terms().items():
            sign = "-" if coeff < 0 else "+"
            magnitude = abs(coeff)
            monomial = self.format_monomial(beta)
            if not monomial:
                body = format_coefficient(magnitude)
            elif magnitude == 1:
                body = monomial
            else:
                body = f"{format_coefficient(magnitude)}*{monomial}"
            if not pieces:
                pieces.append(body if sign == "+" else f"-{body}")
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"<Polynomial({self}; vars={','.join(self.vars)})>"


def monomial_support(f: Polynomial) -> set:
    """Носитель многочлена: мультииндексы ненулевых термов."""
    return f.support()


def partial_derivative(f: Polynomial, index: int) -> Polynomial:
    return f.diff(index)


def iterated_derivative(f: Polynomial, beta: MultiIndex) -> Polynomial:
    return f.derivative(beta)


def translate_to_origin(f: Polynomial, point: Sequence[Scalar]) -> Polynomial:
    return f.translate(point)
