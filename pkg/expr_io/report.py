"""
File: expr_io/report.py
Purpose:
    Стабильная сериализация результатов (инвариант, центр, трассы) в JSON или текст.

Responsibilities:
    - ReportDocument: запись об ассоциированном центре
    - render_report / render_mapping: детерминированный вывод
    - Форматирование рациональных чисел "p/q" и огромных целых "m*k!"

Key Design Decisions:
    - Ключи выводятся в фиксированном каноническом порядке (invariant, weights, marking, ...),
      остальные - по алфавиту; компактные разделители
    - Рациональные числа никогда не выводятся десятичными дробями

Notes:
    - Вывод всегда заканчивается переводом строки
"""
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from config.constants import FACTORIAL_RENDER_THRESHOLD, FORMAT_JSON, FORMAT_TEXT
from utils.exceptions import InvariantViolation, MathError

# Канонический порядок ключей верхнего уровня
REPORT_KEY_ORDER: Tuple[str, ...] = (
    "invariant", "weights", "marking", "parameters", "method", "point",
    "b", "a", "certified", "mode", "trace",
)


def format_rational(value: Union[int, Fraction]) -> str:
    """Рациональное число в виде "p/q" (q >= 1, несократимо)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def format_big_integer(value: int) -> Union[int, str]:
    """
    Целое как есть, либо "m*k!" для огромных значений (k - наибольшее, для которого k! делит value).
    """
    if abs(value) < FACTORIAL_RENDER_THRESHOLD:
        return value
    k = 1
    while value % factorial(k + 1) == 0:
        k += 1
    if k < 2:
        return str(value)
    return f"{value // factorial(k)}*{k}!"


def parse_big_integer(text: Union[int, str]) -> int:
    """Обратная к format_big_integer операция."""
    if isinstance(text, int):
        return text
    if "*" in text and text.endswith("!"):
        multiplier, base = text[:-1].split("*")
        return int(multiplier) * factorial(int(base))
    return int(text)


@dataclass
class ReportDocument:
    """
    Отчет об ассоциированном центре.

    Attributes:
        invariant: Инвариант (a_1..a_k)
        parameters: Параметры центра в координатах пользователя (строки)
        weights: Веса w_i
        marking: Маркировка d
        method: Тег метода
        point: Точка
        trace: Пошаговая трасса (опционально)
        extra: Дополнительные поля (b-последовательность ATW, флаги сертификации)
    """

    invariant: Tuple[Fraction, ...]
    parameters: Tuple[str, ...]
    weights: Tuple[int, ...]
    marking: int
    method: str
    point: Tuple[Fraction, ...]
    trace: Optional[List[Dict[str, Any]]] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    def check(self):
        """Проверить инварианты документа."""
        if len(self.weights) != len(self.invariant):
            raise InvariantViolation("weights and invariant lengths differ")
        for a, w in zip(self.invariant, self.weights):
            if Fraction(self.marking) != a * w:
                raise InvariantViolation(f"weight {w} does not match marking {self.marking} and entry {a}")
        if any(x > y for x, y in zip(self.invariant, self.invariant[1:])):
            raise InvariantViolation("invariant is not non-decreasing")

    def as_mapping(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "invariant": [format_rational(a) for a in self.invariant],
            "weights": list(self.weights),
            "marking": self.marking,
            "parameters": list(self.parameters),
            "method": self.method,
            "point": [format_rational(c) for c in self.point],
        }
        if self.trace is not None:
            data["trace"] = self.trace
        data.update(self.extra)
        return data


def _ordered(data: Dict[str, Any]) -> Dict[str, Any]:
    known = [key for key in REPORT_KEY_ORDER if key in data]
    rest = sorted(key for key in data if key not in REPORT_KEY_ORDER)
    return {key: _normalize(data[key]) for key in known + rest}


def _normalize(value: Any) -> Any:
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): _normalize(value[k]) for k in sorted(value, key=str)}
    if isinstance(value, (list, tuple)):
        return [_normalize(v) for v in value]
    return value


def render_mapping(data: Dict[str, Any], fmt: str = FORMAT_JSON) -> str:
    """Сериализовать словарь в JSON или текст (детерминированно)."""
    ordered = _ordered(data)
    if fmt == FORMAT_JSON:
        return json.dumps(ordered, separators=(",", ":"), ensure_ascii=False) + "\n"
    if fmt == FORMAT_TEXT:
        lines = []
        for key, value in ordered.items():
            if isinstance(value, (list, dict)):
                value = json.dumps(value, separators=(", ", ": "), ensure_ascii=False)
            lines.append(f"{key}: {value}")
        return "\n".join(lines) + "\n"
    raise MathError(f"unknown format: {fmt}")


def render_report(document: ReportDocument, fmt: str = FORMAT_JSON) -> str:
    """
    Сериализовать отчет о центре.

    Raises:
        InvariantViolation: если нарушены инварианты документа
    """
    document.check()
    return render_mapping(document.as_mapping(), fmt)
