"""
File: algebra/ideal.py
Purpose:
    Идеалы, заданные генераторами, и операции над ними в начале координат.

Responsibilities:
    - Тип Ideal (генераторы-ряды, переменные, базовая точка)
    - derive_ideal: D^{≤m}I
    - restrict_to_coordinate_slice: ограничение на V(x_i)
    - Прореживание генераторов (нули, кратные, мономиально избыточные)
    - WorkCounter: счетчики работы для bench

Key Design Decisions:
    - Генераторы хранятся как TruncatedSeries; точные многочлены имеют exact=True
    - Порядок генераторов детерминирован: исходные, затем производные по возрастанию |γ|
    - Мономиальная избыточность проверяется только для точных генераторов

Notes:
    - Нормировка генератора: старший (grlex) коэффициент равен 1
"""
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from algebra.polynomial import MultiIndex, Polynomial, grlex_key
from algebra.series import SeriesLike, TruncatedSeries
from utils.exceptions import MathError


@dataclass
class WorkCounter:
    """Счетчики работы алгоритмов (для bench)."""

    counts: Counter = field(default_factory=Counter)

    def add(self, key: str, amount: int = 1):
        self.counts[key] += amount

    def as_dict(self) -> Dict[str, int]:
        return dict(sorted(self.counts.items()))


@dataclass(frozen=True)
class Ideal:
    """
    Идеал, заданный конечным списком генераторов.

    Attributes:
        gens: Генераторы (ряды от vars)
        vars: Переменные
        base_point: Точка, в которой идеал рассматривается (None - начало координат)
    """

    gens: Tuple[TruncatedSeries, ...]
    vars: Tuple[str, ...]
    base_point: Optional[Tuple[Fraction, ...]] = None

    @classmethod
    def of(cls, generators: Sequence[SeriesLike], variables: Sequence[str] = None,
           base_point: Sequence = None) -> "Ideal":
        gens = tuple(TruncatedSeries.coerce(g) for g in generators)
        if variables is None:
            if not gens:
                raise MathError("ideal without generators needs explicit variables")
            variables = gens[0].vars
        variables = tuple(variables)
        gens = tuple(g.with_vars(variables) for g in gens)
        point = tuple(Fraction(c) for c in base_point) if base_point is not None else None
        return cls(gens, variables, point)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    @property
    def exact(self) -> bool:
        return all(g.exact for g in self.gens)

    def polynomials(self) -> List[Polynomial]:
        return [g.body for g in self.gens]

    @property
    def is_zero(self) -> bool:
        """Идеал точно нулевой."""
        return all(g.is_known_zero for g in self.gens)

    @property
    def has_zero_bodies(self) -> bool:
        return all(g.is_zero_body for g in self.gens)

    def is_unit_at_origin(self) -> bool:
        return any(g.constant_term() != 0 for g in self.gens)

    def vanishes_at(self, point: Sequence) -> bool:
        return all(g.body.evaluate(point) == 0 for g in self.gens)

    def order_at_origin(self) -> Tuple[Optional[int], bool]:
        """
        ord_0 идеала: минимум порядков генераторов.

        Returns:
            (порядок или None, сертифицирован ли ответ)
        """
        best = None
        bound = None
        for g in self.gens:
            value, _ = g.order()
            if value is not None:
                best = value if best is None else min(best, value)
            else:
                lower = g.order_lower_bound()
                if lower is not None:
                    bound = lower if bound is None else min(bound, lower)
        if best is None:
            return None, bound is None
        return best, bound is None or best <= bound

    def with_generators(self, gens: Iterable[TruncatedSeries]) -> "Ideal":
        return Ideal(tuple(gens), self.vars, self.base_point)

    def __str__(self) -> str:
        return "(" + ", ".join(str(g) for g in self.gens) + ")"

    def __repr__(self) -> str:
        return f"<Ideal{self}; vars={','.join(self.vars)}>"


def _normalized(series: TruncatedSeries) -> TruncatedSeries:
    terms = series.body.terms()
    leading = next(iter(terms.values()))
    if leading == 1:
        return series
    return series.scale(1 / leading)


def _divides(small: MultiIndex, big: MultiIndex) -> bool:
    return all(s <= b for s, b in zip(small, big))


def prune_generators(gens: Iterable[TruncatedSeries]) -> Tuple[TruncatedSeries, ...]:
    """
    Убрать нули, дубликаты с точностью до скаляра и точные генераторы,
    все термы которых делятся на точные мономиальные генераторы.
    """
    seen = set()
    kept: List[TruncatedSeries] = []
    for g in gens:
        if g.is_zero_body:
            if g.exact or g.trunc_order < 0:
                continue
        else:
            g = _normalized(g)
        key = (g.body, g.exact, g.trunc_order if not g.exact else None)
        if key in seen:
            continue
        seen.add(key)
        kept.append(g)

    monomials = [next(iter(g.body.support())) for g in kept if g.exact and g.body.is_monomial()]
    if not monomials:
        return tuple(kept)

    minimal = []
    for beta in sorted(set(monomials), key=grlex_key):
        if not any(_divides(m, beta) for m in minimal):
            minimal.append(beta)

    result = []
    for g in kept:
        if g.exact and not g.body.is_zero:
            support = g.body.support()
            if g.body.is_monomial():
                (beta,) = support
                if beta not in minimal:
                    continue
            elif all(any(_divides(m, beta) for m in minimal) for beta in support):
                continue
        result.append(g)
    return tuple(result)


def derivative_multi_indices(nvars: int, order: int) -> List[MultiIndex]:
    """Все γ с |γ| = order в порядке убывания lex (x_1 первым)."""
    result = []
    for combo in combinations_with_replacement(range(nvars), order):
        gamma = [0] * nvars
        for index in combo:
            gamma[index] += 1
        result.append(tuple(gamma))
    return sorted(result, reverse=True)


def derive_ideal(ideal: Ideal, order: int, counter: Optional[WorkCounter] = None,
                 directions: Optional[Sequence[int]] = None) -> Ideal:
    """
    D^{≤m}I: идеал, порожденный ∂^γ g для генераторов g и |γ| <= m.

    Args:
        ideal: Идеал
        order: m >= 0
        counter: Счетчик созданных генераторов
        directions: Индексы переменных, по которым дифференцировать (по умолчанию все)

    Returns:
        Идеал с прореженными генераторами
    """
    if order < 0:
        raise MathError("derivative order must be non-negative")
    if directions is None:
        directions = range(ideal.nvars)
    directions = list(directions)

    generated: List[TruncatedSeries] = list(ideal.gens)
    layer: Dict[Tuple[int, MultiIndex], TruncatedSeries] = {
        (i, (0,) * ideal.nvars): g for i, g in enumerate(ideal.gens)
    }
    for degree in range(1, order + 1):
        next_layer: Dict[Tuple[int, MultiIndex], TruncatedSeries] = {}
        for gamma in derivative_multi_indices(len(directions), degree):
            full = [0] * ideal.nvars
            for slot, count in zip(directions, gamma):
                full[slot] = count
            full = tuple(full)
            # ∂^γ = ∂_i ∂^{γ - e_i} для первой ненулевой позиции
            first = next(i for i, c in enumerate(full) if c)
            parent = tuple(c - 1 if i == first else c for i, c in enumerate(full))
            for index in range(len(ideal.gens)):
                source = layer.get((index, parent))
                if source is None or (source.is_zero_body and source.exact):
                    continue
                derived = source.diff(first)
                next_layer[(index, full)] = derived
        ordered = sorted(next_layer.items(), key=lambda item: (item[0][0], tuple(-c for c in item[0][1])))
        generated.extend(series for _, series in ordered)
        if counter is not None:
            counter.add("derivative_generators", len(next_layer))
        layer = next_layer

    return ideal.with_generators(prune_generators(generated))


def restrict_to_coordinate_slice(ideal: Ideal, coordinates: Sequence[Union[int, str, Polynomial]]) -> Ideal:
    """
    Ограничение идеала на V(x_i, ...): подстановка нуля вместо убиваемых координат.

    Raises:
        MathError: "change coordinates first", если убиваемая функция не координата
    """
    indices = []
    for coordinate in coordinates:
        if isinstance(coordinate, Polynomial):
            index = coordinate.with_vars(ideal.vars).is_homogeneous_variable()
            if index is None:
                raise MathError("change coordinates first")
            indices.append(index)
        elif isinstance(coordinate, str):
            if coordinate not in ideal.vars:
                raise MathError("change coordinates first")
            indices.append(ideal.vars.index(coordinate))
        else:
            indices.append(int(coordinate))
    if not indices:
        return ideal
    restricted = [g.substitute_zero(indices) for g in ideal.gens]
    kept = [g for g in restricted if not g.is_known_zero]
    return ideal.with_generators(prune_generators(kept))
