"""
File: algebra/groebner.py
Purpose:
    Базисы Грёбнера настольного масштаба (sympy groebnertools, алгоритм Бухбергера).

Responsibilities:
    - buchberger: приведенный базис в заданном мономиальном порядке
    - is_unit_ideal / normal_form
    - contains_locally: принадлежность элемента идеалу в локальном кольце начала координат
    - Ограничение задач (guard) по числу переменных и степени

Key Design Decisions:
    - Порядок по умолчанию - graded reverse lex
    - Локальная принадлежность: g ∈ Q·O_0 ⇔ (Q : g) содержит элемент, не равный нулю в 0;
      Q ∩ (g) считается через tQ + (1 - t)g в lex с t старшей переменной

Notes:
    - Guard: settings.GUARD_MAX_VARS переменных, settings.GUARD_MAX_DEGREE степени генераторов
"""
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

from sympy.polys.groebnertools import groebner, is_reduced
from sympy.polys.orderings import grevlex, grlex, lex

from algebra.polynomial import Polynomial, polynomial_ring
from config.constants import ORDER_GREVLEX, ORDER_GRLEX, ORDER_LEX
from config.settings import settings
from utils.exceptions import GuardExceeded, MathError
from utils.logger import logger

_ORDERS = {ORDER_GREVLEX: grevlex, ORDER_GRLEX: grlex, ORDER_LEX: lex}

# Имя вспомогательной переменной для пересечения идеалов
_ELIMINATION_VAR = "_t"

# Более строгий предел степени на время validate
_degree_limit: ContextVar[Optional[int]] = ContextVar("groebner_degree_limit", default=None)


@dataclass(frozen=True)
class GroebnerBasis:
    """
    Приведенный базис Грёбнера.

    Attributes:
        generators: Элементы базиса (многочлены от исходных переменных)
        order: Тег мономиального порядка
        reduced: Флаг приведенности
    """

    generators: Tuple[Polynomial, ...]
    order: str
    reduced: bool

    @property
    def is_unit(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].degree() == 0


@contextmanager
def guard_limits(max_degree: int) -> Iterator[None]:
    """Временно ужесточить предел степени guard (не выше settings.GUARD_MAX_DEGREE)."""
    token = _degree_limit.set(min(max_degree, settings.GUARD_MAX_DEGREE))
    try:
        yield
    finally:
        _degree_limit.reset(token)


def _check_guard(polys: Sequence[Polynomial], extra_vars: int = 0):
    if not polys:
        return
    nvars = polys[0].nvars
    degree = max(p.degree() for p in polys)
    limit = _degree_limit.get()
    if limit is None:
        limit = settings.GUARD_MAX_DEGREE
    if nvars > settings.GUARD_MAX_VARS + extra_vars or degree > limit:
        logger.debug(f"Базис Грёбнера отклонен guard: переменных={nvars}, степень={degree}")
        raise GuardExceeded()


@lru_cache(maxsize=2048)
def _run(polys: Tuple[Polynomial, ...], order: str) -> Tuple[Polynomial, ...]:
    """Базис по тегу порядка; результаты переиспользуются между вызовами."""
    variables = polys[0].vars
    ring = polynomial_ring(variables, _ORDERS[order])
    elements = [ring.from_dict(dict(p.element)) for p in polys if not p.is_zero]
    if not elements:
        return ()
    return tuple(Polynomial(variables, g) for g in groebner(elements, ring, method="buchberger"))


def buchberger(polys: Sequence[Polynomial], order: str = ORDER_GREVLEX) -> GroebnerBasis:
    """
    Приведенный базис Грёбнера идеала.

    Args:
        polys: Генераторы (над одними переменными)
        order: Тег порядка (grevlex, grlex, lex)

    Returns:
        GroebnerBasis

    Raises:
        GuardExceeded: "too large"
    """
    if order not in _ORDERS:
        raise MathError(f"unknown monomial order: {order}")
    polys = [p for p in polys if not p.is_zero]
    if not polys:
        return GroebnerBasis((), order, True)
    _check_guard(polys)
    generators = _run(tuple(polys), order)
    ring = polynomial_ring(polys[0].vars, _ORDERS[order])
    reduced = is_reduced([ring.from_dict(dict(g.element)) for g in generators], ring) if generators else True
    return GroebnerBasis(generators, order, reduced)


def is_unit_ideal(polys: Sequence[Polynomial]) -> bool:
    """True, если идеал равен (1) (глобально)."""
    if any(p.degree() == 0 for p in polys if not p.is_zero):
        return True
    return buchberger(polys).is_unit


def normal_form(f: Polynomial, basis: GroebnerBasis) -> Polynomial:
    """Остаток f при делении на базис."""
    if not basis.generators:
        return f
    ring = polynomial_ring(f.vars, _ORDERS[basis.order])
    element = ring.from_dict(dict(f.element))
    divisors = [ring.from_dict(dict(g.element)) for g in basis.generators]
    return Polynomial(f.vars, element.rem(divisors))


def intersect_with_principal(polys: Sequence[Polynomial], g: Polynomial) -> List[Polynomial]:
    """Генераторы Q ∩ (g) через исключение вспомогательной переменной."""
    variables = (_ELIMINATION_VAR,) + g.vars
    t = Polynomial.variable(variables, 0)
    lifted = [t * p.with_vars(variables) for p in polys if not p.is_zero]
    lifted.append((1 - t) * g.with_vars(variables))
    _check_guard(lifted, extra_vars=1)
    result = []
    for poly in _run(tuple(lifted), ORDER_LEX):
        if all(beta[0] == 0 for beta in poly.support()):
            result.append(poly.with_vars(g.vars))
    return result


def contains_locally(polys: Sequence[Polynomial], g: Polynomial) -> bool:
    """
    Принадлежность g идеалу (polys) в локальном кольце начала координат.

    Returns:
        True, если g ∈ (polys)·O_0
    """
    if g.is_zero:
        return True
    if any(p.constant_term() != 0 for p in polys):
        return True
    ring = polynomial_ring(g.vars)
    for h in intersect_with_principal(polys, g):
        quotient = Polynomial(g.vars, ring.from_dict(dict(h.element)).exquo(g.element))
        if quotient.constant_term() != 0:
            return True
    return False
