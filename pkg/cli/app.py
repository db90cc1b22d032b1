"""
File: cli/app.py
Purpose:
    Командная строка вычислителя: разбор флагов и обработчики подкоманд.

Responsibilities:
    - build_parser: argparse с подкомандами invariant, centre, blowup, resolve, bench, validate, newton-svg
    - cmd_*: обработчики, возвращающие текст отчета и код выхода
    - main: единая точка отображения исключений в коды выхода

Key Design Decisions:
    - Только длинные флаги
    - Отчеты идут в stdout (или в файл --out), ошибки и логи - в stderr
    - ParseError -> 2, MathError -> 3, прочие ошибки -> 1 (config.constants.get_exit_code)

Notes:
    - Запуск: python run.py <команда> ... или python -m cli.app <команда> ...
"""
import argparse
import sys
from pathlib import Path
from typing import Callable, Dict, Optional, Sequence, Tuple

from algebra.ideal import Ideal
from baseline.atw import atw_centre
from blowup.engine import blow_up, resolve
from centres.method_one import associated_centre_m1
from centres.method_two import associated_centre_m2
from centres.newton_graph import newton_set
from cli.bench import render_table, run_bench
from cli.validation import run_validation
from config.constants import (
    ATW_MODE_ORDER_ONLY,
    ATW_MODES,
    EXIT_FAILURE,
    EXIT_OK,
    FORMAT_JSON,
    FORMAT_TEXT,
    FORMATS,
    METHOD_ATW,
    METHOD_DERIVATIVE,
    METHOD_NEWTON,
    METHODS,
    MUTATIONS,
    SUITE_WORKED,
    BENCH_SUITES,
    get_exit_code,
)
from config.settings import settings
from expr_io.newton_svg import newton_svg
from expr_io.parser import parse_point, parse_poly, parse_vars
from expr_io.report import ReportDocument, format_big_integer, format_rational, render_mapping, render_report
from utils.exceptions import MathError, ParseError
from utils.logger import logger, set_level

CommandResult = Tuple[str, int]

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


# ============================================================================
# РАЗБОР ВХОДА
# ============================================================================

def load_ideal(args: argparse.Namespace) -> Tuple[Ideal, Optional[Tuple]]:
    """
    Собрать идеал и точку из флагов --vars, --ideal, --point.

    Raises:
        ParseError: неверные переменные, выражение или точка
    """
    variables = parse_vars(args.vars)
    if not args.ideal:
        raise ParseError("at least one --ideal is required", 0)
    ideal = Ideal.of([parse_poly(text, variables) for text in args.ideal], variables)
    point = parse_point(args.point, len(variables)) if args.point else None
    return ideal, point


def _emit(text: str, args: argparse.Namespace, to_file: bool = True) -> str:
    out = getattr(args, "out", None)
    if to_file and out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"Отчет записан: {path}")
        return ""
    return text


# ============================================================================
# ОБРАБОТЧИКИ ПОДКОМАНД
# ============================================================================

def _centre_document(args: argparse.Namespace, with_trace: bool) -> ReportDocument:
    ideal, point = load_ideal(args)
    if args.method == METHOD_ATW:
        result = atw_centre(ideal, point, mode=args.mode, trunc_cap=args.trunc_cap)
        centre = result.centre
        extra = {
            "b": [format_big_integer(b) for b in result.b],
            "a": [format_rational(a) for a in result.a],
            "mode": result.mode,
            "certified": centre.certified,
        }
        trace = result.trace
    else:
        runner = associated_centre_m1 if args.method == METHOD_NEWTON else associated_centre_m2
        centre, trace = runner(ideal, point, trunc_cap=args.trunc_cap)
        extra = {"certified": centre.certified}
    return ReportDocument(
        invariant=tuple(centre.invariant),
        parameters=centre.user_parameters(),
        weights=tuple(centre.weights),
        marking=centre.marking,
        method=args.method,
        point=tuple(centre.base_point),
        trace=trace if with_trace else None,
        extra=extra,
    )


def cmd_invariant(args: argparse.Namespace) -> CommandResult:
    """Инвариант ассоциированного центра в точке."""
    return _emit(render_report(_centre_document(args, with_trace=False), args.format), args), EXIT_OK


def cmd_centre(args: argparse.Namespace) -> CommandResult:
    """Ассоциированный центр в точке с пошаговой трассой."""
    return _emit(render_report(_centre_document(args, with_trace=True), args.format), args), EXIT_OK


def cmd_blowup(args: argparse.Namespace) -> CommandResult:
    """Одно взвешенное раздутие в ассоциированном центре точки: все карты."""
    ideal, point = load_ideal(args)
    result = blow_up(ideal, point)
    centre = result.centre
    charts = []
    for chart, transform in result.charts:
        data = chart.as_mapping()
        data["ideal"] = [str(g) for g in transform.gens]
        charts.append(data)
    data = {
        "invariant": list(centre.invariant),
        "weights": list(centre.weights),
        "marking": centre.marking,
        "parameters": list(centre.user_parameters()),
        "point": list(centre.base_point),
        "charts": charts,
    }
    return _emit(render_mapping(data, args.format), args), EXIT_OK


def cmd_resolve(args: argparse.Namespace) -> CommandResult:
    """Повторные раздутия до гладкости в проверяемых точках."""
    ideal, point = load_ideal(args)
    samples = [parse_point(text, ideal.nvars) for text in args.samples or ()]
    max_steps = args.max_steps if args.max_steps is not None else settings.DEFAULT_MAX_STEPS
    trace = resolve(ideal, point, max_steps=max_steps, samples=samples)
    return _emit(render_mapping(trace.as_mapping(), args.format), args), EXIT_OK


def cmd_bench(args: argparse.Namespace) -> CommandResult:
    """Сравнение методов на наборе примеров."""
    report = run_bench(args.suite, record=not args.no_record)
    text = render_table(report) if args.format == FORMAT_TEXT else render_mapping(report.as_mapping(), FORMAT_JSON)
    return _emit(text, args), EXIT_OK


def cmd_validate(args: argparse.Namespace) -> CommandResult:
    """Наборы свойств; ненулевой код при любом провале."""
    report = run_validation(fuzz=args.fuzz, seed=args.seed, mutation=args.mutation, record=not args.no_record)
    text = render_mapping(report.as_mapping(), args.format)
    return _emit(text, args), EXIT_OK if report.passed else EXIT_FAILURE


def cmd_newton_svg(args: argparse.Namespace) -> CommandResult:
    """SVG множества Ньютона плоской кривой с отрезками H(a₁), H(a₁, a₂)."""
    ideal, point = load_ideal(args)
    if not args.out:
        raise ParseError("--out is required for newton-svg", 0)
    centre, _ = associated_centre_m1(ideal, point, trunc_cap=args.trunc_cap)
    newton = newton_set([centre.expand(g) for g in ideal.gens])
    path = newton_svg(newton, centre.invariant, args.out, ideal.vars)
    data = {
        "invariant": list(centre.invariant),
        "dots": [list(beta) for beta in newton.minimal_elements],
        "out": str(path),
    }
    return _emit(render_mapping(data, args.format), args, to_file=False), EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace], CommandResult]] = {
    "invariant": cmd_invariant,
    "centre": cmd_centre,
    "blowup": cmd_blowup,
    "resolve": cmd_resolve,
    "bench": cmd_bench,
    "validate": cmd_validate,
    "newton-svg": cmd_newton_svg,
}


# ============================================================================
# ARGPARSE
# ============================================================================

def _add_ideal_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--vars", required=True, help="переменные через запятую, например x,y,z")
    parser.add_argument("--ideal", action="append", default=[], help="генератор идеала (можно повторять)")
    parser.add_argument("--point", default=None, help="точка, например 0,0,1/2 (по умолчанию начало координат)")
    parser.add_argument("--trunc-cap", type=int, default=None, help="предел порядка усечения")


def _add_output_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--format", choices=FORMATS, default=FORMAT_JSON)
    parser.add_argument("--out", default=None, help="записать отчет в файл")


def build_parser() -> argparse.ArgumentParser:
    """Построить разборщик аргументов."""
    parser = argparse.ArgumentParser(prog="wbu", description="Weighted blow-up invariants and associated centres")
    parser.add_argument("--log-level", choices=LOG_LEVELS, default=None, help="уровень логов в stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    for name in ("invariant", "centre"):
        sub = commands.add_parser(name)
        _add_ideal_flags(sub)
        _add_output_flags(sub)
        sub.add_argument("--method", choices=METHODS, default=METHOD_DERIVATIVE)
        sub.add_argument("--mode", choices=ATW_MODES, default=ATW_MODE_ORDER_ONLY)

    sub = commands.add_parser("blowup")
    _add_ideal_flags(sub)
    _add_output_flags(sub)

    sub = commands.add_parser("resolve")
    _add_ideal_flags(sub)
    _add_output_flags(sub)
    sub.add_argument("--max-steps", type=int, default=None)
    sub.add_argument("--samples", action="append", default=[], help="дополнительная точка (можно повторять)")

    sub = commands.add_parser("bench")
    _add_output_flags(sub)
    sub.add_argument("--suite", choices=tuple(BENCH_SUITES), default=SUITE_WORKED)
    sub.add_argument("--no-record", action="store_true", help="не сохранять результаты в БД")

    sub = commands.add_parser("validate")
    _add_output_flags(sub)
    sub.add_argument("--fuzz", type=int, default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--mutation", choices=MUTATIONS, default=None, help="отрицательный контроль")
    sub.add_argument("--no-record", action="store_true", help="не сохранять результаты в БД")

    sub = commands.add_parser("newton-svg")
    _add_ideal_flags(sub)
    sub.add_argument("--format", choices=FORMATS, default=FORMAT_JSON)
    sub.add_argument("--out", default=None, help="путь к SVG")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Разобрать аргументы и выполнить подкоманду.

    Args:
        argv: Аргументы (по умолчанию sys.argv[1:])

    Returns:
        Код выхода
    """
    args = build_parser().parse_args(argv)
    if args.log_level:
        set_level(args.log_level)
    try:
        text, code = COMMANDS[args.command](args)
    except (ParseError, MathError) as e:
        logger.debug(f"Команда {args.command} завершилась ошибкой: {e}")
        print(f"error: {e}", file=sys.stderr)
        return get_exit_code(e)
    except ValueError as e:
        logger.error(f"Ошибка команды {args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return get_exit_code(e)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
