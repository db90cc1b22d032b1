"""
File: utils/exceptions.py
Purpose:
    Иерархия исключений вычислителя. CLI отображает их в коды выхода.

Notes:
    - ParseError -> код 2, MathError и потомки -> код 3
    - Тексты сообщений на английском: они входят в контракт CLI
"""
from typing import Optional


class ParseError(ValueError):
    """
    Ошибка разбора выражения или точки.

    Attributes:
        offset: Байтовое смещение ошибки во входной строке (если известно)
    """

    def __init__(self, message: str, offset: Optional[int] = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} at offset {offset}"
        super().__init__(message)


class MathError(RuntimeError):
    """Математическая ошибка: неверные предусловия или невозможность вычисления."""


class TruncationError(MathError):
    """Текущего порядка усечения недостаточно для сертифицированного ответа."""

    def __init__(self, message: str = "raise truncation"):
        super().__init__(message)


class InvariantViolation(MathError):
    """Нарушен теоретический инвариант (ошибка реализации, а не входных данных)."""


class GuardExceeded(MathError):
    """Задача превышает ограничения настольного масштаба."""

    def __init__(self, message: str = "too large"):
        super().__init__(message)


class ExponentOverflow(MathError):
    """Показатель степени коэффициентного идеала больше предела материализации."""

    def __init__(self, message: str = "exponent overflow; use order-only"):
        super().__init__(message)
