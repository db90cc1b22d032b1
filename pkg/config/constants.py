"""
File: config/constants.py
Purpose:
    Централизованное хранение констант вычислителя для избежания магических значений.

Responsibilities:
    - Идентификаторы методов, форматов и режимов
    - Коды выхода CLI
    - Наборы примеров для bench
    - Константы отчетов и SVG

Key Design Decisions:
    - Константы сгруппированы по функциональности
    - Настраиваемые пределы (усечение, степени, guard) живут в settings, а не здесь

Notes:
    - Коды выхода входят в контракт CLI, менять их нельзя
"""
from typing import Dict, List, Tuple

from utils.exceptions import MathError, ParseError


# ============================================================================
# МЕТОДЫ И РЕЖИМЫ
# ============================================================================

# Метод 1: минимизация Ξ по множеству Ньютона
METHOD_NEWTON: str = "1"

# Метод 2: идеалы производных D[β]
METHOD_DERIVATIVE: str = "2"

# Базовый алгоритм с коэффициентными идеалами
METHOD_ATW: str = "atw"

METHODS: Tuple[str, ...] = (METHOD_NEWTON, METHOD_DERIVATIVE, METHOD_ATW)

# Режимы коэффициентного идеала
ATW_MODE_FULL: str = "full"
ATW_MODE_ORDER_ONLY: str = "order-only"

ATW_MODES: Tuple[str, ...] = (ATW_MODE_ORDER_ONLY, ATW_MODE_FULL)

# Мономиальные порядки для базисов Грёбнера
ORDER_GREVLEX: str = "grevlex"
ORDER_GRLEX: str = "grlex"
ORDER_LEX: str = "lex"


# ============================================================================
# CLI: ФОРМАТЫ И КОДЫ ВЫХОДА
# ============================================================================

FORMAT_JSON: str = "json"
FORMAT_TEXT: str = "text"

FORMATS: Tuple[str, ...] = (FORMAT_JSON, FORMAT_TEXT)

EXIT_OK: int = 0
EXIT_FAILURE: int = 1
EXIT_PARSE_ERROR: int = 2
EXIT_MATH_ERROR: int = 3

# Мутации для отрицательного контроля validate
MUTATION_XI_SIGN: str = "xi_sign"

MUTATIONS: Tuple[str, ...] = (MUTATION_XI_SIGN,)


# ============================================================================
# ОТЧЕТЫ
# ============================================================================

# Большие целые выводятся как "m*k!" начиная с этого порога
FACTORIAL_RENDER_THRESHOLD: int = 10 ** 12

# Сообщение для гладкого входа в resolve
MESSAGE_ALREADY_SMOOTH: str = "already smooth"

# Режимы, из которых получен maxinv узла дерева раздутий
REGIME_POINTS: str = "points"
REGIME_STRATA: str = "strata"


# ============================================================================
# SVG
# ============================================================================

SVG_HASH_SALT: str = "wbu-newton"
SVG_DOT_ID: str = "dot-{0}-{1}"
SVG_SEGMENT_ID: str = "hyperplane-{0}"


# ============================================================================
# BENCH: НАБОРЫ ПРИМЕРОВ
# ============================================================================

SUITE_WORKED: str = "worked"

# (идентификатор, переменные, генераторы)
WORKED_SUITE_CASES: List[Tuple[str, Tuple[str, ...], Tuple[str, ...]]] = [
    *[(f"A{m}", ("x", "y"), (f"x^2 - y^{m + 1}",)) for m in range(1, 7)],
    ("cusp", ("x", "y"), ("x^2 - y^3",)),
    ("whitney", ("x", "y", "z"), ("x^2 - y^2*z",)),
    ("x4y5z6", ("x", "y", "z"), ("x^4 + y^5 + z^6",)),
    ("newton-curve", ("x", "y"), ("x^4 + x*y^4 + y^6",)),
]

BENCH_SUITES: Dict[str, list] = {
    SUITE_WORKED: WORKED_SUITE_CASES,
}


# ============================================================================
# ВСПОМОГАТЕЛЬНЫЕ ФУНКЦИИ
# ============================================================================

def get_suite_cases(suite: str) -> list:
    """
    Получить список примеров набора bench.

    Args:
        suite: Идентификатор набора

    Returns:
        Список кортежей (идентификатор, переменные, генераторы)

    Raises:
        ValueError: Если набор неизвестен
    """
    if suite not in BENCH_SUITES:
        raise ValueError(f"Неизвестный набор: {suite}. Поддерживаемые наборы: {list(BENCH_SUITES.keys())}")
    return BENCH_SUITES[suite]


def get_exit_code(exc: BaseException) -> int:
    """
    Код выхода CLI для исключения.

    Args:
        exc: Перехваченное исключение

    Returns:
        EXIT_PARSE_ERROR для ParseError, EXIT_MATH_ERROR для MathError и потомков, иначе EXIT_FAILURE
    """
    if isinstance(exc, ParseError):
        return EXIT_PARSE_ERROR
    if isinstance(exc, MathError):
        return EXIT_MATH_ERROR
    return EXIT_FAILURE
