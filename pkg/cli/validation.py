"""
File: cli/validation.py
Purpose:
    Наборы свойств команды validate: числовая теорема и лемма, аксиомы нормирования,
    принадлежность Γ, совпадение Методов 1 и 2, переукладка, гладкий подъем,
    неравенство ограничения, оценка σ.

Responsibilities:
    - Стратегии hypothesis для пре-инвариантов, мультииндексов и малых идеалов
    - run_suite: прогон одного свойства с фиксированным seed
    - run_validation: все наборы, итог и (опционально) запись в БД

Key Design Decisions:
    - Генерация - hypothesis с @seed и database=None: прогон детерминирован и не оставляет файлов
    - TruncationError / GuardExceeded на случайном идеале - пропуск примера, а не провал
    - Случайные идеалы считаются с пределами VALIDATE_TRUNC_CAP и VALIDATE_GUARD_MAX_DEGREE;
      инварианты и отказы запоминаются на весь прогон, базисы Грёбнера - в algebra.groebner
    - Мутация xi_sign (знак Δ в знаменателе Ξ) - отрицательный контроль: числовые наборы обязаны упасть

Notes:
    - Число проверенных примеров включает вызовы на фазе сжатия контрпримера
"""
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

from hypothesis import HealthCheck, given, seed as hypothesis_seed, settings as hypothesis_settings
from hypothesis import strategies as st

from algebra.groebner import guard_limits
from algebra.ideal import Ideal
from algebra.polynomial import Polynomial
from baseline.atw import sigma_bound, simplex_size
from centres.invariants import (compare_inv, delta, gamma_member, numerical_lemma_holds,
                                numerical_theorem_holds)
from centres.method_one import associated_centre_m1
from centres.method_two import associated_centre_m2
from centres.weighting import MarkedCentre, weighted_order
from config.constants import MUTATION_XI_SIGN, MUTATIONS
from config.settings import settings
from utils.exceptions import GuardExceeded, MathError, TruncationError
from utils.logger import logger

VARIABLES: Tuple[str, ...] = ("x", "y", "z")


# ============================================================================
# МУТАЦИИ
# ============================================================================

def xi_sign_flipped(a, beta) -> Fraction:
    """Ξ с неверным знаком Δ: (Σ_{i>j} β_i) / (1 + Δ)."""
    return Fraction(sum(beta[len(a):])) / (1 + delta(a, beta))


MUTATED_XI: Dict[str, Callable] = {MUTATION_XI_SIGN: xi_sign_flipped}


# ============================================================================
# СТРАТЕГИИ
# ============================================================================

def pre_invariants(min_size: int = 1, max_size: int = 3, max_value: int = 10):
    """Неубывающие положительные рациональные последовательности."""
    entry = st.fractions(min_value=1, max_value=max_value, max_denominator=6)
    return st.lists(entry, min_size=min_size, max_size=max_size).map(lambda xs: tuple(sorted(xs)))


def multi_indices(length: int, max_entry: int = 8):
    return st.lists(st.integers(0, max_entry), min_size=length, max_size=length).map(tuple)


def _dominated(beta: Tuple[int, ...], steps: Tuple[int, ...]) -> Tuple[int, ...]:
    """γ с частичными суммами не больше частичных сумм β."""
    gamma, previous, total = [], 0, 0
    for b, d in zip(beta, steps):
        total += b
        current = min(total, previous + d)
        gamma.append(current - previous)
        previous = current
    return tuple(gamma)


@st.composite
def theorem_samples(draw):
    b = draw(pre_invariants())
    beta = draw(multi_indices(len(b) + 1))
    gamma = _dominated(beta, draw(multi_indices(len(b) + 1)))
    return b, beta, gamma


@st.composite
def lemma_samples(draw):
    b = draw(pre_invariants())
    return b, draw(multi_indices(len(b) + 1))


@st.composite
def polynomials(draw, nvars: int, max_terms: int = 3, max_degree: int = 6, constant: bool = False):
    """Ненулевой многочлен с малыми целыми коэффициентами."""
    exponent = st.lists(st.integers(0, max_degree), min_size=nvars, max_size=nvars).map(tuple).filter(
        lambda beta: (constant or sum(beta) > 0) and sum(beta) <= max_degree)
    terms = draw(st.dictionaries(exponent, st.sampled_from([-2, -1, 1, 2]), min_size=1, max_size=max_terms))
    return Polynomial.from_terms(VARIABLES[:nvars], terms)


# Предел степени генераторов по числу переменных: базисы Грёбнера и усечение
# случайных идеалов остаются в пределах VALIDATE_GUARD_MAX_DEGREE и VALIDATE_TRUNC_CAP
IDEAL_DEGREE_CAPS: Dict[int, int] = {1: 6, 2: 5, 3: 4}


@st.composite
def small_ideals(draw, min_vars: int = 1, max_vars: int = 3):
    """Идеал из 1-2 многочленов без свободного члена (начало координат лежит на V(I))."""
    nvars = draw(st.integers(min_vars, max_vars))
    gens = draw(st.lists(polynomials(nvars, max_degree=IDEAL_DEGREE_CAPS[nvars]), min_size=1, max_size=2))
    return tuple(gens)


def weight_vectors(max_size: int = 3, max_weight: int = 6):
    """Веса с НОД 1 (веса гладкого центра)."""
    return st.lists(st.integers(1, max_weight), min_size=1, max_size=max_size).filter(lambda ws: gcd(*ws) == 1)


def invariant_of_weights(weights: Sequence[int]) -> Tuple[Fraction, ...]:
    """Инвариант (d / w_i), d = НОК весов, по неубыванию."""
    d = lcm(*weights)
    return tuple(sorted(Fraction(d, w) for w in weights))


@st.composite
def valuation_samples(draw):
    invariant = invariant_of_weights(draw(weight_vectors()))
    f = draw(polynomials(len(VARIABLES), max_terms=4, constant=True))
    g = draw(polynomials(len(VARIABLES), max_terms=4, constant=True))
    return invariant, f, g


# ============================================================================
# КЭШ ИНВАРИАНТОВ
# ============================================================================

class _Skip(Exception):
    """Пример вне возможностей настольного масштаба."""


# Наборы с одной стратегией и одним seed получают одни и те же идеалы:
# инварианты (и отказы) считаются один раз на весь прогон validate
_INVARIANTS: Dict[Tuple[str, Tuple[Polynomial, ...]], Union[Tuple[Fraction, ...], _Skip]] = {}


def _compute_m2(gens: Tuple[Polynomial, ...]) -> Tuple[Fraction, ...]:
    centre, _ = associated_centre_m2(Ideal.of(list(gens)), trunc_cap=settings.VALIDATE_TRUNC_CAP)
    return tuple(centre.invariant)


def _compute_m1(gens: Tuple[Polynomial, ...]) -> Tuple[Fraction, ...]:
    centre, _ = associated_centre_m1(Ideal.of(list(gens)), trunc_cap=settings.VALIDATE_TRUNC_CAP)
    return tuple(centre.invariant)


_RUNNERS: Dict[str, Callable[[Tuple[Polynomial, ...]], Tuple[Fraction, ...]]] = {
    "m1": _compute_m1,
    "m2": _compute_m2,
}


def cached_invariant(method: str, gens: Tuple[Polynomial, ...]) -> Tuple[Fraction, ...]:
    """
    Инвариант идеала в начале координат с памятью на весь прогон.

    Raises:
        _Skip: если нужен порядок усечения выше VALIDATE_TRUNC_CAP или сработал guard
    """
    key = (method, gens)
    if key not in _INVARIANTS:
        try:
            _INVARIANTS[key] = _RUNNERS[method](gens)
        except (TruncationError, GuardExceeded) as e:
            _INVARIANTS[key] = _Skip(str(e))
    value = _INVARIANTS[key]
    if isinstance(value, _Skip):
        raise value
    return value


def _extend(gens: Tuple[Polynomial, ...], name: str) -> Tuple[Polynomial, ...]:
    variables = gens[0].vars + (name,)
    return tuple(g.with_vars(variables) for g in gens)


# ============================================================================
# СВОЙСТВА
# ============================================================================

def check_theorem(sample, xi_fn=None) -> bool:
    b, beta, gamma = sample
    return numerical_theorem_holds(b, beta, gamma, xi_fn)


def check_lemma(sample, xi_fn=None) -> bool:
    b, beta = sample
    return numerical_lemma_holds(b, beta, xi_fn)


def check_valuation(sample) -> bool:
    invariant, f, g = sample
    params = [Polynomial.variable(VARIABLES, i) for i in range(len(invariant))]
    centre = MarkedCentre.build(VARIABLES, params, invariant)
    vf = weighted_order(centre, f).value
    vg = weighted_order(centre, g).value
    v_product = weighted_order(centre, f * g).value
    v_sum = weighted_order(centre, f + g).value
    if v_product != vf + vg:
        return False
    lower = min(vf, vg)
    if v_sum < lower:
        return False
    return vf == vg or v_sum == lower


def check_gamma(gens) -> bool:
    return gamma_member(cached_invariant("m2", gens))


def check_methods_agree(gens) -> bool:
    return cached_invariant("m1", gens) == cached_invariant("m2", gens)


def check_reembedding(gens) -> bool:
    """inv(I + (t)) в n+1 переменных равен (1, a_1, ..., a_k)."""
    base = cached_invariant("m2", gens)
    extended = _extend(gens, "t")
    t = Polynomial.variable(extended[0].vars, "t")
    return cached_invariant("m2", extended + (t,)) == (Fraction(1),) + base


def check_dummy_variable(gens) -> bool:
    """Добавление неиспользуемой переменной не меняет инвариант."""
    return cached_invariant("m2", _extend(gens, "t")) == cached_invariant("m2", gens)


def check_restriction(gens) -> bool:
    """inv_X(0) <= inv_{X∩W}(0) для W = V(последней переменной), если X∩W имеет положительную коразмерность."""
    nvars = gens[0].nvars
    if nvars < 2:
        return True
    restricted = tuple(g.substitute_zero([nvars - 1]).with_vars(gens[0].vars[:-1])
                       for g in gens if not g.substitute_zero([nvars - 1]).is_zero)
    if not restricted:
        return True
    return compare_inv(cached_invariant("m2", gens), cached_invariant("m2", restricted)) <= 0


def check_sigma(invariant) -> bool:
    return simplex_size(invariant) <= sigma_bound(invariant)


# ============================================================================
# ПРОГОН
# ============================================================================

@dataclass
class SuiteResult:
    """Итог одного набора свойств."""

    name: str
    passed: bool
    samples: int
    skipped: int = 0
    failure: Optional[str] = None
    seconds: float = 0.0

    def as_mapping(self) -> Dict[str, Any]:
        data = {"suite": self.name, "passed": self.passed, "samples": self.samples, "skipped": self.skipped}
        if self.failure:
            data["failure"] = self.failure
        return data


@dataclass
class ValidationReport:
    seed: int
    fuzz: int
    mutation: Optional[str] = None
    results: List[SuiteResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def seconds(self) -> float:
        return sum(result.seconds for result in self.results)

    def as_mapping(self) -> Dict[str, Any]:
        data = {
            "passed": self.passed,
            "seed": self.seed,
            "fuzz": self.fuzz,
            "suites": [result.as_mapping() for result in self.results],
        }
        if self.mutation:
            data["mutation"] = self.mutation
        return data


def run_suite(name: str, strategy, check: Callable[[Any], bool], fuzz: int, seed: int) -> SuiteResult:
    """
    Прогнать свойство check на fuzz примерах из strategy.

    Returns:
        SuiteResult; при провале failure содержит (сжатый) контрпример
    """
    counts = {"samples": 0, "skipped": 0}

    @hypothesis_settings(max_examples=fuzz, deadline=None, database=None, report_multiple_bugs=False,
                         suppress_health_check=list(HealthCheck))
    @hypothesis_seed(seed)
    @given(strategy)
    def prop(sample):
        counts["samples"] += 1
        try:
            holds = check(sample)
        except _Skip:
            counts["skipped"] += 1
            return
        assert holds, f"counterexample: {sample!r}"

    started = time.perf_counter()
    failure = None
    try:
        prop()
    except AssertionError as e:
        failure = str(e).splitlines()[0] if str(e) else "property failed"
    except Exception as e:
        failure = f"{type(e).__name__}: {e}"
    elapsed = time.perf_counter() - started

    result = SuiteResult(name, failure is None, counts["samples"], counts["skipped"], failure, elapsed)
    if result.passed:
        logger.info(f"validate: {name} пройден ({result.samples} примеров, {elapsed:.2f} с)")
    else:
        logger.warning(f"validate: {name} провален: {failure}")
    return result


def validation_suites(mutation: Optional[str] = None) -> List[Tuple[str, Any, Callable[[Any], bool]]]:
    """Список (имя, стратегия, проверка)."""
    if mutation is not None and mutation not in MUTATIONS:
        raise MathError(f"unknown mutation: {mutation}")
    xi_fn = MUTATED_XI.get(mutation)
    return [
        ("numerical_theorem", theorem_samples(), lambda s: check_theorem(s, xi_fn)),
        ("numerical_lemma", lemma_samples(), lambda s: check_lemma(s, xi_fn)),
        ("valuation", valuation_samples(), check_valuation),
        ("gamma_membership", small_ideals(), check_gamma),
        ("method_agreement", small_ideals(), check_methods_agree),
        ("reembedding", small_ideals(max_vars=2), check_reembedding),
        ("smooth_pullback", small_ideals(max_vars=2), check_dummy_variable),
        ("restriction_inequality", small_ideals(min_vars=2), check_restriction),
        ("sigma_bound", pre_invariants(max_size=3), check_sigma),
    ]


def run_validation(fuzz: Optional[int] = None, seed: Optional[int] = None, mutation: Optional[str] = None,
                   record: bool = True, only: Optional[List[str]] = None) -> ValidationReport:
    """
    Прогнать все наборы свойств.

    Args:
        fuzz: Число примеров на набор (по умолчанию settings.DEFAULT_FUZZ)
        seed: Seed (по умолчанию settings.DEFAULT_SEED)
        mutation: Отрицательный контроль (xi_sign)
        record: Сохранить результаты в БД
        only: Ограничить список наборов

    Returns:
        ValidationReport
    """
    fuzz = settings.DEFAULT_FUZZ if fuzz is None else fuzz
    seed = settings.DEFAULT_SEED if seed is None else seed
    report = ValidationReport(seed, fuzz, mutation)

    if simplex_size((4, 5)) != 14:
        report.results.append(SuiteResult("sigma_datapoint", False, 1, failure="simplex_size(4, 5) != 14"))
    else:
        report.results.append(SuiteResult("sigma_datapoint", True, 1))

    _INVARIANTS.clear()
    with guard_limits(settings.VALIDATE_GUARD_MAX_DEGREE):
        for name, strategy, check in validation_suites(mutation):
            if only and name not in only:
                continue
            report.results.append(run_suite(name, strategy, check, fuzz, seed))

    if record:
        from database.db_manager import db_manager
        for result in report.results:
            db_manager.save_validation_run(result.name, seed, fuzz, result.samples, result.passed, result.failure)
    logger.info(f"validate: {'все наборы пройдены' if report.passed else 'есть провалы'} за {report.seconds:.1f} с")
    return report
