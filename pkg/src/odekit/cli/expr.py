"""Expression language for scalars and operators.

Precedence, loosest first: ``+ -``, then ``* / @``, then unary ``-``, then
``^`` (right associative).  ``D`` is the derivation, ``i`` the imaginary unit
and ``z`` the independent variable; any other name must be declared in the
tower.  Literals are integers; decimal points are rejected so that nothing
inexact enters the exact path.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from ..field import GaussRat, RatFun
from ..linop import LinOp
from ..tower import Tower, TowerElem


class ExprError(ValueError):
    """Syntax or type error with a 1-based source position."""

    def __init__(self, msg: str, line: int, col: int, kind: str = "syntax error") -> None:
        super().__init__(f"{kind} at line {line}, column {col}: {msg}")
        self.msg, self.line, self.col, self.kind = msg, line, col, kind


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    end: int


@dataclass(frozen=True)
class Node:
    span: Span = field(compare=False, repr=False)


@dataclass(frozen=True)
class Num(Node):
    value: int = 0


@dataclass(frozen=True)
class Name(Node):
    name: str = ""


@dataclass(frozen=True)
class Neg(Node):
    arg: Node = None


@dataclass(frozen=True)
class Bin(Node):
    op: str = "+"
    left: Node = None
    right: Node = None


ExprAst = Node

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+)|(\d+)|([A-Za-z_][A-Za-z_0-9]*'*)|(.))")
_BINDING = {"+": 10, "-": 10, "*": 20, "/": 20, "@": 20, "^": 40}
_UNARY = 30


@dataclass(frozen=True)
class _Tok:
    kind: str  # num, name, op, end
    text: str
    line: int
    col: int


def _tokens(text: str) -> list[_Tok]:
    out = []
    for lineno, line in enumerate(text.split("\n"), 1):
        pos = 0
        while pos < len(line):
            m = _TOKEN.match(line, pos)
            if m is None or m.end() == pos:
                break
            col = m.start(m.lastindex) + 1 if m.lastindex else m.end() + 1
            if m.group(1):
                raise ExprError("decimal literals are not allowed; write a fraction", lineno, col)
            if m.group(2):
                out.append(_Tok("num", m.group(2), lineno, col))
            elif m.group(3):
                out.append(_Tok("name", m.group(3), lineno, col))
            elif m.group(4):
                ch = m.group(4)
                if ch not in "+-*/^@()":
                    raise ExprError(f"unexpected character {ch!r}", lineno, col)
                out.append(_Tok("op", ch, lineno, col))
            pos = m.end()
    lines = text.split("\n")
    out.append(_Tok("end", "", len(lines), len(lines[-1]) + 1))
    return out


class _Parser:
    def __init__(self, text: str) -> None:
        self.toks = _tokens(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expr(self, rbp: int = 0) -> Node:
        left = self.nud(self.take())
        while True:
            t = self.peek()
            if t.kind != "op" or t.text not in _BINDING or _BINDING[t.text] <= rbp:
                return left
            self.take()
            bp = _BINDING[t.text]
            right = self.expr(bp - 1 if t.text == "^" else bp)
            left = Bin(Span(left.span.line, left.span.col, right.span.end), t.text, left, right)

    def nud(self, t: _Tok) -> Node:
        if t.kind == "num":
            return Num(Span(t.line, t.col, t.col + len(t.text)), int(t.text))
        if t.kind == "name":
            return Name(Span(t.line, t.col, t.col + len(t.text)), t.text)
        if t.kind == "op" and t.text == "-":
            arg = self.expr(_UNARY)
            return Neg(Span(t.line, t.col, arg.span.end), arg)
        if t.kind == "op" and t.text == "(":
            inner = self.expr(0)
            close = self.take()
            if close.kind != "op" or close.text != ")":
                raise ExprError("expected ')'", close.line, close.col)
            return inner
        what = "end of input" if t.kind == "end" else repr(t.text)
        raise ExprError(f"unexpected {what}", t.line, t.col)


def parse(text: str) -> ExprAst:
    p = _Parser(text)
    node = p.expr(0)
    t = p.peek()
    if t.kind != "end":
        raise ExprError(f"unexpected {t.text!r}", t.line, t.col)
    return node


def render(node: ExprAst) -> str:
    """Fully parenthesised text that parses back to the same tree."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Name):
        return node.name
    if isinstance(node, Neg):
        return f"(-{render(node.arg)})"
    return f"({render(node.left)} {node.op} {render(node.right)})"


# --------------------------------------------------------------------------- evaluation


class Scope:
    """Evaluation context: plain rational functions, or elements of a declared tower."""

    def __init__(self, tower: Tower | None = None) -> None:
        self.tower = tower

    def scalar(self, x):
        if self.tower is None:
            return RatFun.coerce(x)
        return self.tower.convert(x)

    def name(self, node: Name):
        n = node.name
        if n == "z":
            return self.scalar(RatFun.z())
        if n == "i":
            return self.scalar(GaussRat(0, 1))
        if n == "D":
            return LinOp.D(self.scalar(0))
        if self.tower is not None and n in self.tower:
            return self.tower.gen(n)
        raise ExprError(f"undeclared name {n!r}", node.span.line, node.span.col, "name error")


def _type_error(node: Node, msg: str) -> ExprError:
    return ExprError(msg, node.span.line, node.span.col, "type error")


def _const(node: Node, v) -> Fraction:
    if isinstance(v, LinOp) or not v.is_const():
        raise _type_error(node, "exponent must be a rational constant")
    c = v.const_value()
    if c.im:
        raise _type_error(node, "exponent must be real")
    return c.re


def evaluate(node: ExprAst, scope: Scope):
    if isinstance(node, Num):
        return scope.scalar(node.value)
    if isinstance(node, Name):
        return scope.name(node)
    if isinstance(node, Neg):
        return -evaluate(node.arg, scope)
    a = evaluate(node.left, scope)
    b = evaluate(node.right, scope)
    op = node.op
    if op == "^":
        e = _const(node.right, b)
        if isinstance(a, LinOp):
            if e.denominator != 1 or e < 0:
                raise _type_error(node.right, "operator powers must be nonnegative integers")
            out = LinOp([1], a.zero_elem())
            for _ in range(int(e)):
                out = out @ a
            return out
        if e.denominator == 1:
            if a.is_zero() and e < 0:
                raise _type_error(node, "zero to a negative power")
            return a ** int(e)
        if isinstance(node.left, Name) and node.left.name == "z":
            return scope.scalar(RatFun.monomial(1, e))
        raise _type_error(node, "fractional powers are only allowed on z")
    if op == "+":
        return a + b if not isinstance(b, LinOp) or isinstance(a, LinOp) else b + a
    if op == "-":
        return a - b if not isinstance(b, LinOp) or isinstance(a, LinOp) else (-b) + a
    if op == "*":
        if isinstance(b, LinOp) and not isinstance(a, LinOp):
            return b.__rmul__(a)  # scalar on the left multiplies the coefficients
        return a * b
    if op == "@":
        if not isinstance(a, LinOp) or not isinstance(b, LinOp):
            bad = node.left if not isinstance(a, LinOp) else node.right
            raise _type_error(bad, "composition needs operators on both sides")
        return a @ b
    if op == "/":
        if isinstance(b, LinOp):
            raise _type_error(node.right, "cannot divide by an operator")
        if b.is_zero():
            raise _type_error(node.right, "division by zero")
        if isinstance(a, LinOp):
            return b.inverse() * a
        return a / b
    raise _type_error(node, f"unknown operator {op!r}")  # pragma: no cover


def eval_text(text: str, scope: Scope):
    return evaluate(parse(text), scope)


def eval_operator(text: str, scope: Scope) -> LinOp:
    node = parse(text)
    v = evaluate(node, scope)
    if not isinstance(v, LinOp):
        raise _type_error(node, "expected an operator, got a scalar")
    return v


def eval_scalar(text: str, scope: Scope) -> RatFun | TowerElem:
    node = parse(text)
    v = evaluate(node, scope)
    if isinstance(v, LinOp):
        raise _type_error(node, "expected a scalar, got an operator")
    return v


def split_top(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        depth += ch == "("
        depth -= ch == ")"
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [s.strip() for s in out if s.strip()]
