"""
File: expr_io/parser.py
Purpose:
    Разбор многочленов, списков переменных и рациональных точек из текста.

Responsibilities:
    - Токенизация с байтовыми смещениями
    - Разбор выражений методом precedence climbing в дерево ExprAst
    - Вычисление дерева в Polynomial над заданными переменными

Key Design Decisions:
    - Приоритеты: ^ > унарный минус > * > бинарные + и -
    - Показатель степени - только целый литерал; ^ правоассоциативен
    - Деление допускается только в рациональных литералах p/q
    - Неявное умножение ("2x") - ошибка "unexpected token"

Notes:
    - Все ошибки - ParseError со смещением
"""
import re
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

from algebra.polynomial import Polynomial
from utils.exceptions import ParseError

IDENTIFIER = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
NUMBER = re.compile(r"[0-9]+")

# Группы бинарных операторов по возрастанию приоритета
OPERATORS = [
    [("+", "left"), ("-", "left")],
    [("*", "left")],
    [("^", "right")],
]

OPERATOR_PREC = {info[0]: idx for idx, group in enumerate(OPERATORS) for info in group}
OPERATOR_ASSOC = {info[0]: info[1] for group in OPERATORS for info in group}

Token = Tuple[str, Union[str, int], int]
ExprAst = tuple


def tokenize(source: str) -> List[Token]:
    """Разбить строку на токены (вид, значение, смещение)."""
    if not source.isascii():
        offset = next(i for i, c in enumerate(source) if not c.isascii())
        raise ParseError("only ASCII input is supported", len(source[:offset].encode("utf-8")))
    tokens: List[Token] = []
    idx = 0
    while idx < len(source):
        c = source[idx]
        if c.isspace():
            idx += 1
            continue
        if c.isdigit():
            match = NUMBER.match(source, idx)
            tokens.append(("num", int(match.group()), idx))
            idx = match.end()
            continue
        if c.isalpha():
            match = IDENTIFIER.match(source, idx)
            tokens.append(("ident", match.group(), idx))
            idx = match.end()
            continue
        if c in "+-*^/()":
            tokens.append(("op", c, idx))
            idx += 1
            continue
        raise ParseError(f"unexpected character {c!r}", idx)
    return tokens


class _Stream:
    def __init__(self, tokens: List[Token], length: int):
        self.tokens = tokens
        self.pos = 0
        self.length = length

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def pop(self) -> Token:
        token = self.peek()
        if token is None:
            raise ParseError("unexpected end of input", self.length)
        self.pos += 1
        return token

    def is_op(self, value: str) -> bool:
        token = self.peek()
        return token is not None and token[0] == "op" and token[1] == value


def _exponent(stream: _Stream) -> int:
    token = stream.pop()
    if token[0] != "num":
        raise ParseError("non-integer exponent", token[2])
    value = token[1]
    if stream.is_op("^"):
        stream.pop()
        value = value ** _exponent(stream)
    return value


def _atom(stream: _Stream) -> ExprAst:
    token = stream.pop()
    kind, value, offset = token
    if kind == "op" and value == "-":
        # унарный минус слабее ^: -x^2 = -(x^2)
        return ("neg", _parse(stream, OPERATOR_PREC["^"]))
    if kind == "op" and value == "(":
        result = _parse(stream, 0)
        closing = stream.peek()
        if closing is None or closing[:2] != ("op", ")"):
            raise ParseError("expected closing parenthesis", closing[2] if closing else stream.length)
        stream.pop()
        return result
    if kind == "num":
        if stream.is_op("/"):
            slash = stream.pop()
            denominator = stream.peek()
            if denominator is None or denominator[0] != "num":
                raise ParseError("malformed literal", slash[2])
            stream.pop()
            if denominator[1] == 0:
                raise ParseError("malformed literal", denominator[2])
            return ("num", Fraction(value, denominator[1]))
        return ("num", Fraction(value))
    if kind == "ident":
        return ("var", value, offset)
    raise ParseError(f"unexpected token {value!r}", offset)


def _parse(stream: _Stream, min_prec: int) -> ExprAst:
    lhs = _atom(stream)
    while True:
        token = stream.peek()
        if token is None or token[0] != "op" or token[1] not in OPERATOR_PREC:
            return lhs
        op = token[1]
        op_prec = OPERATOR_PREC[op]
        if op_prec < min_prec:
            return lhs
        stream.pop()
        if op == "^":
            lhs = ("pow", lhs, _exponent(stream))
            continue
        next_prec = op_prec + 1 if OPERATOR_ASSOC[op] == "left" else op_prec
        rhs = _parse(stream, next_prec)
        lhs = ({"+": "add", "-": "sub", "*": "mul"}[op], lhs, rhs)


def parse_expression(text: str) -> ExprAst:
    """Разобрать строку в дерево выражения."""
    tokens = tokenize(text)
    if not tokens:
        raise ParseError("empty expression", 0)
    stream = _Stream(tokens, len(text))
    tree = _parse(stream, 0)
    leftover = stream.peek()
    if leftover is not None:
        raise ParseError(f"unexpected token {leftover[1]!r}", leftover[2])
    return tree


def evaluate(tree: ExprAst, variables: Sequence[str]) -> Polynomial:
    """Вычислить дерево выражения как многочлен от variables."""
    kind = tree[0]
    if kind == "num":
        return Polynomial.constant(variables, tree[1])
    if kind == "var":
        if tree[1] not in variables:
            raise ParseError(f"unknown identifier {tree[1]!r}", tree[2])
        return Polynomial.variable(variables, tree[1])
    if kind == "neg":
        return -evaluate(tree[1], variables)
    if kind == "pow":
        return evaluate(tree[1], variables) ** tree[2]
    lhs = evaluate(tree[1], variables)
    rhs = evaluate(tree[2], variables)
    if kind == "add":
        return lhs + rhs
    if kind == "sub":
        return lhs - rhs
    return lhs * rhs


def parse_vars(text: Union[str, Sequence[str]]) -> Tuple[str, ...]:
    """
    Разобрать список переменных "x,y,z".

    Raises:
        ParseError: пустой список, неверное имя или повтор
    """
    names = [part.strip() for part in text.split(",")] if isinstance(text, str) else list(text)
    if not names or names == [""]:
        raise ParseError("empty variable list", 0)
    offset = 0
    for name in names:
        if not IDENTIFIER.fullmatch(name):
            raise ParseError(f"invalid variable name {name!r}", offset)
        offset += len(name) + 1
    if len(set(names)) != len(names):
        raise ParseError("duplicate variable name", 0)
    return tuple(names)


def parse_poly(text: str, variables: Sequence[str]) -> Polynomial:
    """
    Разобрать многочлен.

    Args:
        text: Выражение, например "x^2 - y^2*z"
        variables: Упорядоченные имена переменных

    Returns:
        Polynomial

    Raises:
        ParseError: неизвестный идентификатор, нецелый показатель, неверный литерал
    """
    variables = parse_vars(variables)
    return evaluate(parse_expression(text), variables)


def parse_rational(text: str, offset: int = 0) -> Fraction:
    match = re.fullmatch(r"\s*(-?)([0-9]+)(?:/([0-9]+))?\s*", text)
    if not match:
        raise ParseError(f"malformed rational {text.strip()!r}", offset)
    sign, numerator, denominator = match.groups()
    if denominator is not None and int(denominator) == 0:
        raise ParseError("malformed literal", offset)
    value = Fraction(int(numerator), int(denominator) if denominator else 1)
    return -value if sign else value


def parse_point(text: str, dimension: int = None) -> Tuple[Fraction, ...]:
    """
    Разобрать точку "0,0,1/2".

    Raises:
        ParseError: неверный литерал или размерность
    """
    coords = []
    offset = 0
    for part in text.split(","):
        coords.append(parse_rational(part, offset))
        offset += len(part) + 1
    if dimension is not None and len(coords) != dimension:
        raise ParseError(f"point has {len(coords)} coordinates, expected {dimension}", 0)
    return tuple(coords)
