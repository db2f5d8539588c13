"""Parser and evaluator for single-variable coefficient expressions.

Grammar (lowest to highest precedence)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' unary)?          # right-associative
    atom   := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

The only free variable is ``x``.  Evaluation accepts a float or a numpy
array and stays in the reals; anything that would leave them raises
:class:`EvalDomainError`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import EvalDomainError, ExprSyntaxError, UnknownIdentifier

__all__ = [
    "Expr",
    "Const",
    "Var",
    "NamedConst",
    "Neg",
    "BinOp",
    "Call",
    "parse_expr",
    "eval_expr",
    "unparse",
    "is_constant",
    "FUNCTIONS",
    "CONSTANTS",
]

FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}
CONSTANTS = {"pi": math.pi, "e": math.e}
BINARY_OPS = ("+", "-", "*", "/", "^")


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str = "x"


@dataclass(frozen=True)
class NamedConst:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Const, Var, NamedConst, Neg, BinOp, Call]


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", src, pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, pos = self.peek()
        if text != value or kind == "end":
            found = "end of input" if kind == "end" else repr(text)
            raise ExprSyntaxError(f"expected {value!r}, found {found}", self.src, pos)
        return self.advance()

    def parse(self) -> Expr:
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(
                f"expected operator or end of input, found {text!r}", self.src, pos
            )
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.unary())
        if kind == "op" and text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, text, pos = self.advance()
        if kind == "num":
            return Const(float(text))
        if kind == "name":
            if text == "x":
                return Var()
            if text in CONSTANTS:
                return NamedConst(text)
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            raise UnknownIdentifier(f"unknown identifier {text!r}", self.src, pos)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(text)
        raise ExprSyntaxError(
            f"expected number, name or '(', found {found}", self.src, pos
        )


def parse_expr(src: str) -> Expr:
    """Parse ``src`` into an immutable expression tree.

    Raises
    ------
    ExprSyntaxError
        On malformed input; the message carries the character position.
    UnknownIdentifier
        For any name outside ``x``, the function whitelist and ``pi``/``e``.
    """
    if not isinstance(src, str) or not src.strip():
        raise ExprSyntaxError("empty expression", str(src), 0)
    return _Parser(src).parse()


def unparse(e: Expr) -> str:
    """Render a tree back to source; binary nodes are always parenthesized."""
    if isinstance(e, Const):
        if e.value < 0 or not math.isfinite(e.value):
            raise ValueError(f"cannot unparse constant {e.value!r}")
        return repr(float(e.value))
    if isinstance(e, Var):
        return "x"
    if isinstance(e, NamedConst):
        return e.name
    if isinstance(e, Neg):
        return f"(-{unparse(e.operand)})"
    if isinstance(e, BinOp):
        return f"({unparse(e.left)} {e.op} {unparse(e.right)})"
    if isinstance(e, Call):
        return f"{e.func}({unparse(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


def is_constant(e: Expr) -> bool:
    """True when the tree does not reference ``x``."""
    if isinstance(e, Var):
        return False
    if isinstance(e, (Const, NamedConst)):
        return True
    if isinstance(e, Neg):
        return is_constant(e.operand)
    if isinstance(e, BinOp):
        return is_constant(e.left) and is_constant(e.right)
    if isinstance(e, Call):
        return is_constant(e.arg)
    raise TypeError(f"not an expression node: {e!r}")


def _check_finite(v, what: str):
    if not np.all(np.isfinite(v)):
        raise EvalDomainError(f"non-finite result in {what}")
    return v


def _eval(e: Expr, x):
    if isinstance(e, Const):
        return np.full_like(x, e.value) if isinstance(x, np.ndarray) else e.value
    if isinstance(e, Var):
        return x
    if isinstance(e, NamedConst):
        v = CONSTANTS[e.name]
        return np.full_like(x, v) if isinstance(x, np.ndarray) else v
    if isinstance(e, Neg):
        return -_eval(e.operand, x)
    if isinstance(e, BinOp):
        a = _eval(e.left, x)
        b = _eval(e.right, x)
        with np.errstate(all="ignore"):
            if e.op == "+":
                r = a + b
            elif e.op == "-":
                r = a - b
            elif e.op == "*":
                r = a * b
            elif e.op == "/":
                if np.any(np.asarray(b) == 0):
                    raise EvalDomainError("division by zero")
                r = a / b
            else:
                base = np.asarray(a, dtype=float)
                expo = np.asarray(b, dtype=float)
                if np.any((base < 0) & (expo != np.round(expo))):
                    raise EvalDomainError("non-integer power of a negative base")
                if np.any((base == 0) & (expo < 0)):
                    raise EvalDomainError("division by zero (zero to a negative power)")
                r = np.power(base, expo)
                if not isinstance(x, np.ndarray):
                    r = float(r)
        return _check_finite(r, f"'{e.op}'")
    if isinstance(e, Call):
        a = _eval(e.arg, x)
        if e.func == "log" and np.any(np.asarray(a) <= 0):
            raise EvalDomainError("log of a non-positive number")
        if e.func == "sqrt" and np.any(np.asarray(a) < 0):
            raise EvalDomainError("sqrt of a negative number")
        with np.errstate(all="ignore"):
            r = FUNCTIONS[e.func](a)
        if not isinstance(x, np.ndarray):
            r = float(r)
        return _check_finite(r, e.func)
    raise TypeError(f"not an expression node: {e!r}")


def eval_expr(e: Expr, x):
    """Evaluate ``e`` at ``x`` (float or array of floats)."""
    if isinstance(x, np.ndarray):
        return _check_finite(np.asarray(_eval(e, x.astype(float)), dtype=float), "expression")
    return float(_check_finite(_eval(e, float(x)), "expression"))
