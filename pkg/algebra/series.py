"""
File: algebra/series.py
Purpose:
    Усеченные степенные ряды, подстановки и локальные системы координат.

Responsibilities:
    - TruncatedSeries: тело-многочлен + порядок усечения T + флаг точности
    - SubstitutionMap и substitute (композиция f∘σ с усечением)
    - invert_etale_change: формальное обращение этальной замены координат
    - CoordinateFrame: текущая система координат поиска центра

Key Design Decisions:
    - Точный ряд (exact=True) - это многочлен без хвоста; операции над точными рядами не усекают
    - Для неточных рядов T - максимальная полная степень, до которой тело известно
    - Имена переменных в CoordinateFrame не меняются; принятые параметры стоят на первых позициях (slots)
    - Обратная замена строится итерацией неподвижной точки, не более T проходов

Notes:
    - T = -1 означает, что о ряде ничего не известно (например, после многократного дифференцирования)
"""
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from algebra.polynomial import MultiIndex, Polynomial, Scalar
from utils.exceptions import MathError


class TruncatedSeries:
    """
    Ряд, известный до полной степени trunc_order.

    Attributes:
        body: Многочлен из термов степени <= trunc_order
        trunc_order: Порядок усечения T
        exact: True, если ряд совпадает с телом (хвоста нет)
    """

    __slots__ = ("body", "trunc_order", "exact")

    def __init__(self, body: Polynomial, trunc_order: int, exact: bool = False):
        if trunc_order < -1:
            trunc_order = -1
        if exact:
            trunc_order = max(trunc_order, body.degree(), 0)
        else:
            body = body.truncate(trunc_order)
        self.body = body
        self.trunc_order = trunc_order
        self.exact = exact

    @classmethod
    def exact_of(cls, poly: Polynomial) -> "TruncatedSeries":
        return cls(poly, poly.degree(), exact=True)

    @classmethod
    def coerce(cls, value: Union["TruncatedSeries", Polynomial]) -> "TruncatedSeries":
        if isinstance(value, TruncatedSeries):
            return value
        return cls.exact_of(value)

    @property
    def vars(self) -> Tuple[str, ...]:
        return self.body.vars

    # ------------------------------------------------------------------
    # Арифметика
    # ------------------------------------------------------------------

    def _combine(self, other: "TruncatedSeries") -> Tuple[int, bool]:
        if self.exact and other.exact:
            return max(self.trunc_order, other.trunc_order), True
        orders = [s.trunc_order for s in (self, other) if not s.exact]
        return min(orders), False

    def _coerce_other(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, Polynomial):
            return TruncatedSeries.exact_of(other)
        return TruncatedSeries.exact_of(Polynomial.constant(self.vars, other))

    def __add__(self, other):
        other = self._coerce_other(other)
        order, exact = self._combine(other)
        return TruncatedSeries(self.body + other.body, order, exact)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce_other(other)
        order, exact = self._combine(other)
        return TruncatedSeries(self.body - other.body, order, exact)

    def __mul__(self, other):
        other = self._coerce_other(other)
        order, exact = self._combine(other)
        body = self.body * other.body
        return TruncatedSeries(body if exact else body.truncate(order), order, exact)

    __rmul__ = __mul__

    def __neg__(self):
        return TruncatedSeries(-self.body, self.trunc_order, self.exact)

    def scale(self, value: Scalar) -> "TruncatedSeries":
        return TruncatedSeries(self.body.scale(value), self.trunc_order, self.exact)

    def diff(self, index: int) -> "TruncatedSeries":
        if self.exact:
            return TruncatedSeries(self.body.diff(index), self.trunc_order, True)
        return TruncatedSeries(self.body.diff(index), self.trunc_order - 1)

    def derivative(self, beta: MultiIndex) -> "TruncatedSeries":
        if self.exact:
            return TruncatedSeries(self.body.derivative(beta), self.trunc_order, True)
        return TruncatedSeries(self.body.derivative(beta), self.trunc_order - sum(beta))

    def substitute_zero(self, indices: Iterable[int]) -> "TruncatedSeries":
        return TruncatedSeries(self.body.substitute_zero(indices), self.trunc_order, self.exact)

    def with_vars(self, variables: Sequence[str]) -> "TruncatedSeries":
        return TruncatedSeries(self.body.with_vars(variables), self.trunc_order, self.exact)

    # ------------------------------------------------------------------
    # Запросы
    # ------------------------------------------------------------------

    @property
    def is_zero_body(self) -> bool:
        return self.body.is_zero

    @property
    def is_known_zero(self) -> bool:
        return self.exact and self.body.is_zero

    def order(self) -> Tuple[Optional[int], bool]:
        """
        Порядок в начале координат.

        Returns:
            (порядок или None для бесконечности/неизвестности, сертифицирован ли ответ)
        """
        if not self.body.is_zero:
            return self.body.order(), True
        return None, self.exact

    def order_lower_bound(self) -> Optional[int]:
        """Нижняя оценка порядка (None - ряд точно нулевой)."""
        if not self.body.is_zero:
            return self.body.order()
        if self.exact:
            return None
        return self.trunc_order + 1

    def constant_term(self) -> Fraction:
        return self.body.constant_term()

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.body == other.body and self.trunc_order == other.trunc_order
                and self.exact == other.exact)

    def __hash__(self) -> int:
        return hash((self.body, self.trunc_order, self.exact))

    def __str__(self) -> str:
        if self.exact:
            return str(self.body)
        return f"{self.body} + O({self.trunc_order + 1})"

    def __repr__(self) -> str:
        return f"<TruncatedSeries({self}; vars={','.join(self.vars)})>"


SeriesLike = Union[TruncatedSeries, Polynomial]


class SubstitutionMap:
    """
    Подстановка x_name -> ряд от target_vars.

    Attributes:
        images: Образы переменных
        target_vars: Переменные образов
        trunc_order: Общий порядок усечения
    """

    __slots__ = ("images", "target_vars", "trunc_order")

    def __init__(self, images: Mapping[str, SeriesLike], target_vars: Sequence[str], trunc_order: int):
        self.target_vars: Tuple[str, ...] = tuple(target_vars)
        self.images: Dict[str, TruncatedSeries] = {
            name: TruncatedSeries.coerce(image).with_vars(self.target_vars)
            for name, image in images.items()
        }
        self.trunc_order = trunc_order

    @classmethod
    def identity(cls, variables: Sequence[str], trunc_order: int) -> "SubstitutionMap":
        return cls({name: Polynomial.variable(variables, i) for i, name in enumerate(variables)},
                   variables, trunc_order)

    @property
    def exact(self) -> bool:
        return all(image.exact for image in self.images.values())

    def __getitem__(self, name: str) -> TruncatedSeries:
        return self.images[name]

    def __repr__(self) -> str:
        body = ", ".join(f"{name}->{image}" for name, image in self.images.items())
        return f"<SubstitutionMap({body})>"


def substitute(f: SeriesLike, mapping: SubstitutionMap) -> TruncatedSeries:
    """
    Композиция f∘σ.

    Args:
        f: Многочлен или ряд от переменных, покрытых подстановкой
        mapping: Подстановка

    Returns:
        Ряд от mapping.target_vars; точный, если f и все используемые образы точные

    Raises:
        MathError: "incomplete substitution", если переменной f нет среди образов
    """
    series = TruncatedSeries.coerce(f)
    missing = [name for name in series.vars if name not in mapping.images]
    if missing:
        raise MathError("incomplete substitution")

    support = series.body.support()
    used = [name for i, name in enumerate(series.vars) if any(beta[i] for beta in support)]
    inexact_orders = [mapping.images[name].trunc_order for name in used if not mapping.images[name].exact]
    if not series.exact:
        # образы без свободного члена: хвост степени > T переходит в хвост степени > T
        inexact_orders.append(series.trunc_order)

    bodies = {name: mapping.images[name].body for name in series.vars}
    if not inexact_orders:
        return TruncatedSeries(series.body.compose(bodies, mapping.target_vars), 0, exact=True)

    order = min(inexact_orders)
    if order < 0:
        return TruncatedSeries(Polynomial.zero(mapping.target_vars), -1)
    body = series.body.compose(bodies, mapping.target_vars, truncate_at=order)
    return TruncatedSeries(body, order)


def invert_etale_change(variables: Sequence[str], slot: Union[int, str], new_param: SeriesLike,
                        trunc_order: int) -> SubstitutionMap:
    """
    Обратить замену координат u_slot -> new_param(u).

    Новая координата нормируется так, чтобы ее линейный коэффициент при u_slot был 1.
    Старая координата ищется как h(v) итерацией h <- v_slot - R(v; u_slot = h),
    где R = new_param - u_slot.

    Args:
        variables: Текущие переменные
        slot: Индекс или имя заменяемой переменной
        new_param: Новый параметр (ряд или многочлен от variables)
        trunc_order: Порядок усечения T > 0

    Returns:
        SubstitutionMap σ: u_slot -> h(v), остальные тождественно; exact=True, если обращение точное

    Raises:
        MathError: "not a parameter at p" при нулевом линейном коэффициенте или ненулевом свободном члене
    """
    variables = tuple(variables)
    if trunc_order <= 0:
        raise MathError("truncation order must be positive")
    index = variables.index(slot) if isinstance(slot, str) else slot
    param = TruncatedSeries.coerce(new_param).with_vars(variables)

    if param.constant_term() != 0:
        raise MathError("not a parameter at p")
    linear = param.body.linear_part().get(index, Fraction(0))
    if linear == 0:
        raise MathError("not a parameter at p")

    normalized = param.scale(1 / linear)
    order = trunc_order if param.exact else min(trunc_order, param.trunc_order)
    coordinate = Polynomial.variable(variables, index)
    rest = normalized.body - coordinate
    identity = {name: Polynomial.variable(variables, i) for i, name in enumerate(variables)}

    inverse = coordinate
    for _ in range(order + 1):
        images = dict(identity)
        images[variables[index]] = inverse
        updated = (coordinate - rest.compose(images, variables, truncate_at=order)).truncate(order)
        if updated == inverse:
            break
        inverse = updated

    exact = False
    if param.exact:
        images = dict(identity)
        images[variables[index]] = inverse
        exact = normalized.body.compose(images, variables) == coordinate

    result = {name: TruncatedSeries.exact_of(poly) for name, poly in identity.items()}
    result[variables[index]] = TruncatedSeries(inverse, order, exact=exact)
    return SubstitutionMap(result, variables, order)


class CoordinateFrame:
    """
    Локальная система координат в начале координат.

    Attributes:
        vars: Имена переменных (не меняются при заменах)
        slots: slots[p] - индекс переменной, стоящей на позиции p; принятые параметры занимают первые позиции
        to_original: x_name -> ряд от текущих координат u
        from_original: u_i -> ряд от исходных x (по индексу переменной)
        trunc_order: Порядок усечения T
        epoch: Номер замены (растет при каждой смене координат)
    """

    __slots__ = ("vars", "slots", "to_original", "from_original", "trunc_order", "epoch")

    def __init__(self, variables: Sequence[str], slots: Sequence[int], to_original: SubstitutionMap,
                 from_original: Sequence[TruncatedSeries], trunc_order: int, epoch: int = 0):
        self.vars: Tuple[str, ...] = tuple(variables)
        self.slots: Tuple[int, ...] = tuple(slots)
        self.to_original = to_original
        self.from_original: Tuple[TruncatedSeries, ...] = tuple(from_original)
        self.trunc_order = trunc_order
        self.epoch = epoch

    @classmethod
    def identity(cls, variables: Sequence[str], trunc_order: int,
                 slots: Optional[Sequence[int]] = None, epoch: int = 0) -> "CoordinateFrame":
        """Тождественная система; slots задает порядок позиций (по умолчанию порядок переменных)."""
        variables = tuple(variables)
        return cls(
            variables,
            range(len(variables)) if slots is None else slots,
            SubstitutionMap.identity(variables, trunc_order),
            [TruncatedSeries.exact_of(Polynomial.variable(variables, i)) for i in range(len(variables))],
            trunc_order,
            epoch,
        )

    @classmethod
    def from_parameters(cls, variables: Sequence[str], params: Sequence[SeriesLike],
                        trunc_order: int) -> "CoordinateFrame":
        """
        Построить систему, в которой params (от исходных координат, нулевые в начале) - первые координаты.

        Raises:
            MathError: "not a parameter at p", если дифференциалы зависимы
        """
        frame = cls.identity(variables, trunc_order)
        for position, param in enumerate(params):
            frame, _ = frame.adopt(frame.express(param), position)
        return frame

    @property
    def exact(self) -> bool:
        return self.to_original.exact and all(series.exact for series in self.from_original)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def var_at(self, position: int) -> int:
        return self.slots[position]

    def name_at(self, position: int) -> str:
        return self.vars[self.slots[position]]

    def position_of(self, var_index: int) -> int:
        return self.slots.index(var_index)

    def express(self, f: SeriesLike) -> TruncatedSeries:
        """Выразить функцию от исходных координат в текущих."""
        return substitute(f, self.to_original)

    def coordinate_in_original(self, position: int) -> TruncatedSeries:
        return self.from_original[self.slots[position]]

    def positional_exponent(self, beta: MultiIndex) -> MultiIndex:
        """Переставить мультииндекс из порядка переменных в порядок позиций."""
        return tuple(beta[var] for var in self.slots)

    def variable_exponent(self, gamma: MultiIndex) -> MultiIndex:
        """Обратная операция к positional_exponent."""
        beta = [0] * self.nvars
        for position, var in enumerate(self.slots):
            beta[var] = gamma[position]
        return tuple(beta)

    def adopt(self, param: TruncatedSeries, position: int,
              source: Optional[int] = None) -> Tuple["CoordinateFrame", int]:
        """
        Сделать param (ряд от текущих координат) координатой на позиции position.

        Заменяется координата на позиции source, либо (по умолчанию) координата с наименьшей
        позицией >= position, входящая в линейную часть param.

        Returns:
            (новая система, позиция, с которой была взята заменяемая координата)
        """
        param = TruncatedSeries.coerce(param).with_vars(self.vars)
        if param.constant_term() != 0:
            raise MathError("not a parameter at p")
        linear = param.body.linear_part()
        candidates = [p for p in range(position, self.nvars) if linear.get(self.slots[p], 0) != 0]
        if source is not None:
            candidates = [p for p in candidates if p == source]
        if not candidates:
            raise MathError("not a parameter at p")
        chosen = candidates[0]
        var = self.slots[chosen]

        inverse = invert_etale_change(self.vars, var, param, self.trunc_order)
        to_original = SubstitutionMap(
            {name: substitute(image, inverse) for name, image in self.to_original.images.items()},
            self.vars, self.trunc_order,
        )

        normalized = param.scale(1 / linear[var])
        old_coordinates = SubstitutionMap(
            {name: self.from_original[i] for i, name in enumerate(self.vars)},
            self.from_original[0].vars, self.trunc_order,
        )
        from_original = list(self.from_original)
        from_original[var] = substitute(normalized, old_coordinates)

        slots = list(self.slots)
        slots[position], slots[chosen] = slots[chosen], slots[position]
        return CoordinateFrame(self.vars, slots, to_original, from_original,
                               self.trunc_order, self.epoch + 1), chosen

    def __repr__(self) -> str:
        order = ",".join(self.name_at(p) for p in range(self.nvars))
        return f"<CoordinateFrame(positions={order}, T={self.trunc_order}, exact={self.exact}, epoch={self.epoch})>"
