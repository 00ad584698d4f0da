"""Arithmetic expression language for payoff functions.

Grammar (highest precedence last)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom (('^' | '**') unary)?
    atom   := NUMBER | NAME | FUNC '(' expr ')' | '(' expr ')'

``+ - * /`` associate to the left; ``^`` associates to the right and binds
tighter than unary minus, so ``-x^2`` is ``-(x^2)``. Exponents must not
contain variables. The same tree is evaluated over floats, ``Dual`` or ``Jet``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Union

from .autodiff import Dual, Jet

FUNCTIONS = ("sin", "cos", "exp", "log")


class ExpressionError(ValueError):
    """Parse failure; ``position`` is the 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ExpressionSyntaxError(ExpressionError):
    pass


class MalformedNumberError(ExpressionError):
    pass


class UndeclaredVariableError(ExpressionError):
    def __init__(self, name: str, position: int):
        super().__init__(f"undeclared variable {name!r}", position)
        self.name = name


class DomainError(ArithmeticError):
    """Expression evaluated outside the domain of one of its operations."""


# --- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Const, Var, Neg, BinOp, Pow, Call]


def variables_of(node: Node) -> set[str]:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Const):
        return set()
    if isinstance(node, (Neg, Call)):
        return variables_of(node.operand if isinstance(node, Neg) else node.arg)
    if isinstance(node, BinOp):
        return variables_of(node.left) | variables_of(node.right)
    return variables_of(node.base) | variables_of(node.exponent)


# --- tokenizer -------------------------------------------------------------

_NUMBER = re.compile(r"(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_OPS = ("**", "+", "-", "*", "/", "^", "(", ")")


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    pos: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    i = 0
    while i < len(source):
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            m = _NUMBER.match(source, i)
            end = m.end() if m else i + 1
            if m is None or (end < len(source) and (source[end].isalnum() or source[end] in "._")):
                j = end
                while j < len(source) and (source[j].isalnum() or source[j] in "._"):
                    j += 1
                raise MalformedNumberError(f"malformed number {source[i:max(j, i + 1)]!r}", i)
            tokens.append(_Token("num", m.group(0), i))
            i = end
            continue
        m = _NAME.match(source, i)
        if m:
            tokens.append(_Token("name", m.group(0), i))
            i = m.end()
            continue
        for op in _OPS:
            if source.startswith(op, i):
                tokens.append(_Token("op", "^" if op == "**" else op, i))
                i += len(op)
                break
        else:
            raise ExpressionSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("end", "", len(source)))
    return tokens


# --- parser ----------------------------------------------------------------


class _Parser:
    def __init__(self, source: str, variables: Iterable[str]):
        self.tokens = _tokenize(source)
        self.i = 0
        self.variables = set(variables)

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> None:
        if self.tok.text != text or self.tok.kind != "op":
            raise ExpressionSyntaxError(f"expected {text!r}, found {self._describe()}", self.tok.pos)
        self.advance()

    def _describe(self) -> str:
        return "end of input" if self.tok.kind == "end" else repr(self.tok.text)

    def parse(self) -> Node:
        if self.tok.kind == "end":
            raise ExpressionSyntaxError("empty expression", 0)
        node = self.expr()
        if self.tok.kind != "end":
            raise ExpressionSyntaxError(f"unexpected {self._describe()}", self.tok.pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        if self.tok.kind == "op" and self.tok.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            pos = self.tok.pos
            exponent = self.unary()
            if variables_of(exponent):
                raise ExpressionSyntaxError("exponent must be constant", pos)
            return Pow(base, exponent)
        return base

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Const(float(t.text))
        if t.kind == "name":
            self.advance()
            if self.tok.kind == "op" and self.tok.text == "(":
                if t.text not in FUNCTIONS:
                    raise ExpressionSyntaxError(f"unknown function {t.text!r}", t.pos)
                self.advance()
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            if t.text in FUNCTIONS:
                raise ExpressionSyntaxError(f"function {t.text!r} requires an argument", t.pos)
            if t.text not in self.variables:
                raise UndeclaredVariableError(t.text, t.pos)
            return Var(t.text)
        if t.kind == "op" and t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise ExpressionSyntaxError(f"unexpected {self._describe()}", t.pos)


def parse(source: str, variables: Iterable[str]) -> Node:
    """Parse ``source``; every name must be a function or one of ``variables``."""
    return _Parser(source, variables).parse()


# --- printer ---------------------------------------------------------------

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC_ADD if node.op in "+-" else _PREC_MUL
    if isinstance(node, Neg):
        return _PREC_NEG
    if isinstance(node, Pow):
        return _PREC_POW
    if isinstance(node, Const) and (node.value < 0 or math.copysign(1.0, node.value) < 0):
        return _PREC_NEG
    return _PREC_ATOM


def _wrap(node: Node, parens: bool) -> str:
    s = to_source(node)
    return f"({s})" if parens else s


def to_source(node: Node) -> str:
    """Print with the minimal parentheses needed to re-parse the same tree."""
    if isinstance(node, Const):
        return repr(float(node.value))
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, _prec(node.operand) < _PREC_NEG)
    if isinstance(node, Pow):
        base = _wrap(node.base, _prec(node.base) <= _PREC_POW)
        exponent = _wrap(node.exponent, _prec(node.exponent) < _PREC_NEG)
        return f"{base}^{exponent}"
    level = _prec(node)
    left = _wrap(node.left, _prec(node.left) < level)
    right = _wrap(node.right, _prec(node.right) <= level)
    return f"{left} {node.op} {right}"


# --- evaluation ------------------------------------------------------------

Value = Union[float, Dual, Jet]


def _order(v: Value) -> int:
    if isinstance(v, Jet):
        return 2
    if isinstance(v, Dual):
        return 1
    return 0


def _real(v: Value) -> float:
    return v if isinstance(v, float) else v.a


def _power(t: float, k: float) -> float:
    if t == 0.0 and k < 0:
        raise DomainError(f"0 raised to negative power {k!r}")
    if t < 0.0 and not float(k).is_integer():
        raise DomainError(f"negative base {t!r} raised to non-integer power {k!r}")
    try:
        return t**k
    except OverflowError:
        return math.copysign(math.inf, t) if float(k).is_integer() and k % 2 == 1 else math.inf


def _power_derivs(t: float, k: float, order: int) -> tuple[float, float, float]:
    f0 = _power(t, k)
    f1 = f2 = 0.0
    if order >= 1 and k != 0.0:
        f1 = k * (1.0 if k == 1.0 else _power(t, k - 1.0))
    if order >= 2 and k not in (0.0, 1.0):
        f2 = k * (k - 1.0) * (1.0 if k == 2.0 else _power(t, k - 2.0))
    return f0, f1, f2


def _func_derivs(name: str, t: float) -> tuple[float, float, float]:
    if name == "sin":
        s, c = math.sin(t), math.cos(t)
        return s, c, -s
    if name == "cos":
        s, c = math.sin(t), math.cos(t)
        return c, -s, -c
    if name == "exp":
        e = math.exp(t) if t < 709.0 else math.inf
        return e, e, e
    if t <= 0.0:
        raise DomainError(f"log of non-positive value {t!r}")
    return math.log(t), 1.0 / t, -1.0 / (t * t)


def _apply(v: Value, f0: float, f1: float, f2: float) -> Value:
    return f0 if isinstance(v, float) else v.chain(f0, f1, f2)


def evaluate(node: Node, env: dict[str, Value]) -> Value:
    """Evaluate over floats, ``Dual`` or ``Jet``; variables are looked up in ``env``."""
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Neg):
        return -evaluate(node.operand, env)
    if isinstance(node, BinOp):
        left = evaluate(node.left, env)
        right = evaluate(node.right, env)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        t = _real(right)
        if t == 0.0:
            raise DomainError("division by zero")
        if isinstance(right, float):
            return left / t if isinstance(left, float) else left * (1.0 / t)
        return left * right.chain(1.0 / t, -1.0 / (t * t), 2.0 / (t * t * t))
    if isinstance(node, Pow):
        k = evaluate(node.exponent, {})
        base = evaluate(node.base, env)
        if isinstance(base, float):
            return _power(base, k)
        return base.chain(*_power_derivs(base.a, k, _order(base)))
    arg = evaluate(node.arg, env)
    return _apply(arg, *_func_derivs(node.func, _real(arg)))
