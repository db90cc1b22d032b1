"""
File: cli/bench.py
Purpose:
    Сравнение методов на наборе примеров: инвариант, счетчики работы, время.

Responsibilities:
    - run_bench: прогон Методов 1, 2 и базового алгоритма (order-only) по примерам набора
    - BenchReport: строки и отношения счетчиков "exponent_sum" / "derivative_generators"
    - render_table: текстовая таблица

Key Design Decisions:
    - Каждый пример и метод получают свой WorkCounter
    - Ошибка одного метода на одном примере не прерывает прогон: строка получает поле error
    - Отношение считается только если оба счетчика положительны

Notes:
    - Набор "worked": A_1..A_6, каспа, зонтик Уитни, x^4+y^5+z^6, x^4+xy^4+y^6
"""
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from algebra.ideal import Ideal, WorkCounter
from baseline.atw import atw_centre
from centres.method_one import associated_centre_m1
from centres.method_two import associated_centre_m2
from config.constants import METHOD_ATW, METHOD_DERIVATIVE, METHOD_NEWTON, SUITE_WORKED, get_suite_cases
from expr_io.parser import parse_poly
from expr_io.report import format_big_integer, format_rational
from utils.exceptions import MathError
from utils.logger import logger

# Ключи счетчиков, которые сравнивает отчет
DERIVATIVE_COUNTER = "derivative_generators"
EXPONENT_COUNTER = "exponent_sum"


@dataclass
class BenchReport:
    """
    Итог bench.

    Attributes:
        suite: Идентификатор набора
        rows: Строки (case, method, invariant, counters, time[, error][, b])
        ratios: case -> exponent_sum / derivative_generators
    """

    suite: str
    rows: List[Dict[str, Any]] = field(default_factory=list)
    ratios: Dict[str, Fraction] = field(default_factory=dict)

    def as_mapping(self) -> Dict[str, Any]:
        rows = []
        for row in self.rows:
            data = dict(row)
            data["invariant"] = [format_rational(a) for a in row["invariant"]]
            data["time"] = round(row["time"], 6)
            if "b" in data:
                data["b"] = [format_big_integer(b) for b in row["b"]]
            data["counters"] = {key: format_big_integer(value) for key, value in row["counters"].items()}
            rows.append(data)
        return {
            "suite": self.suite,
            "rows": rows,
            "ratios": {case: _format_ratio(value) for case, value in self.ratios.items()},
        }


def _format_ratio(value: Fraction) -> Any:
    whole = value.numerator // value.denominator
    return format_big_integer(whole) if whole >= 1 else format_rational(value)


def _run_case(case_id: str, variables, generators, method: str) -> Dict[str, Any]:
    ideal = Ideal.of([parse_poly(g, variables) for g in generators], variables)
    counter = WorkCounter()
    row: Dict[str, Any] = {"case": case_id, "method": method, "invariant": (), "counters": {}}
    started = time.perf_counter()
    try:
        if method == METHOD_NEWTON:
            centre, _ = associated_centre_m1(ideal)
            row["invariant"] = tuple(centre.invariant)
        elif method == METHOD_DERIVATIVE:
            centre, _ = associated_centre_m2(ideal, counter=counter)
            row["invariant"] = tuple(centre.invariant)
        else:
            result = atw_centre(ideal, counter=counter)
            row["invariant"] = tuple(result.a)
            row["b"] = tuple(result.b)
    except MathError as e:
        logger.warning(f"bench: {case_id}, метод {method}: {e}")
        row["error"] = str(e)
    except Exception as e:
        logger.error(f"bench: сбой на {case_id}, метод {method}: {e}", exc_info=True)
        row["error"] = f"{type(e).__name__}: {e}"
    row["time"] = time.perf_counter() - started
    row["counters"] = counter.as_dict()
    return row


def run_bench(suite: str = SUITE_WORKED, methods=(METHOD_NEWTON, METHOD_DERIVATIVE, METHOD_ATW),
              record: bool = True, cases: Optional[List[str]] = None) -> BenchReport:
    """
    Прогнать набор примеров.

    Args:
        suite: Идентификатор набора
        methods: Какие методы запускать
        record: Сохранить строки в БД
        cases: Ограничить список примеров

    Returns:
        BenchReport

    Raises:
        ValueError: неизвестный набор
    """
    report = BenchReport(suite)
    for case_id, variables, generators in get_suite_cases(suite):
        if cases and case_id not in cases:
            continue
        by_method = {}
        for method in methods:
            row = _run_case(case_id, variables, generators, method)
            report.rows.append(row)
            by_method[method] = row
            logger.info(f"bench: {case_id} / {method}: {tuple(str(a) for a in row['invariant'])}, "
                        f"{row['time']:.3f} с")
        derivative = by_method.get(METHOD_DERIVATIVE, {}).get("counters", {}).get(DERIVATIVE_COUNTER, 0)
        exponents = by_method.get(METHOD_ATW, {}).get("counters", {}).get(EXPONENT_COUNTER, 0)
        if derivative > 0 and exponents > 0:
            report.ratios[case_id] = Fraction(exponents, derivative)

    if record:
        from database.db_manager import db_manager
        db_manager.save_bench_records(suite, report.rows)
    return report


def render_table(report: BenchReport) -> str:
    """Текстовая таблица bench."""
    header = ("case", "method", "invariant", DERIVATIVE_COUNTER, EXPONENT_COUNTER, "time")
    lines = [header]
    for row in report.rows:
        invariant = row.get("error") or "(" + ", ".join(format_rational(a) for a in row["invariant"]) + ")"
        counters = row["counters"]
        lines.append((
            row["case"],
            row["method"],
            invariant,
            str(format_big_integer(counters.get(DERIVATIVE_COUNTER, 0))),
            str(format_big_integer(counters.get(EXPONENT_COUNTER, 0))),
            f"{row['time']:.3f}",
        ))
    widths = [max(len(line[i]) for line in lines) for i in range(len(header))]
    text = ["  ".join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip() for line in lines]
    for case, ratio in report.ratios.items():
        text.append(f"ratio {case}: {_format_ratio(ratio)}")
    return "\n".join(text) + "\n"
