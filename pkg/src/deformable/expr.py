"""Single-variable real expressions: parsing, evaluation, differentiation.

Expressions are immutable trees over the variable ``t``::

    >>> e = parse("t*exp(t)")
    >>> evaluate(differentiate(e), 0.0)
    1.0

The grammar accepted by :func:`parse` is::

    expr  := term (("+"|"-") term)*
    term  := unary (("*"|"/") unary)*
    unary := "-" unary | power
    power := atom ("^" unary)?
    atom  := NUMBER | "t" | "pi" | "e" | FUNC "(" expr ")" | "(" expr ")"
    FUNC  := "sin" | "cos" | "exp" | "log" | "sqrt"
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable

__all__ = [
    "Expr",
    "Const",
    "Var",
    "Unary",
    "Binary",
    "T",
    "ParseError",
    "EvalDomainError",
    "parse",
    "evaluate",
    "lambdify",
    "differentiate",
    "nth_derivative",
    "simplify",
    "depends_on_t",
    "format_number",
]

UNARY_OPS = ("neg", "sin", "cos", "exp", "log", "sqrt")
BINARY_OPS = ("add", "sub", "mul", "div", "pow")
FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt")

class Expr:
    """Base class for expression nodes.

    Arithmetic operators build new trees; plain numbers are promoted to
    :class:`Const`. No simplification happens on construction.
    """

    __slots__ = ()

    def __add__(self, other):
        return Binary("add", self, as_expr(other))

    def __radd__(self, other):
        return Binary("add", as_expr(other), self)

    def __sub__(self, other):
        return Binary("sub", self, as_expr(other))

    def __rsub__(self, other):
        return Binary("sub", as_expr(other), self)

    def __mul__(self, other):
        return Binary("mul", self, as_expr(other))

    def __rmul__(self, other):
        return Binary("mul", as_expr(other), self)

    def __truediv__(self, other):
        return Binary("div", self, as_expr(other))

    def __rtruediv__(self, other):
        return Binary("div", as_expr(other), self)

    def __pow__(self, other):
        return Binary("pow", self, as_expr(other))

    def __rpow__(self, other):
        return Binary("pow", as_expr(other), self)

    def __neg__(self):
        return Unary("neg", self)

    def __call__(self, t: float) -> float:
        return evaluate(self, t)

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, eq=True, repr=True)
class Const(Expr):
    value: float

    def __post_init__(self):
        v = float(self.value)
        if not math.isfinite(v):
            raise ValueError(f"constant must be finite, got {self.value!r}")
        object.__setattr__(self, "value", v)


@dataclass(frozen=True, eq=True, repr=True)
class Var(Expr):
    """The independent variable ``t``."""


@dataclass(frozen=True, eq=True, repr=True)
class Unary(Expr):
    op: str
    child: Expr

    def __post_init__(self):
        if self.op not in UNARY_OPS:
            raise ValueError(f"unknown unary op {self.op!r}")


@dataclass(frozen=True, eq=True, repr=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr

    def __post_init__(self):
        if self.op not in BINARY_OPS:
            raise ValueError(f"unknown binary op {self.op!r}")


T = Var()
ZERO = Const(0.0)
ONE = Const(1.0)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, float)):
        return Const(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Expr")


def depends_on_t(e: Expr) -> bool:
    if isinstance(e, Var):
        return True
    if isinstance(e, Const):
        return False
    if isinstance(e, Unary):
        return depends_on_t(e.child)
    return depends_on_t(e.left) or depends_on_t(e.right)


# --------------------------------------------------------------------------
# Parsing


class ParseError(ValueError):
    """Syntax error at a byte offset of the input."""

    def __init__(self, message: str, offset: int, expected: frozenset[str]):
        self.offset = offset
        self.expected = frozenset(expected)
        exp = ", ".join(sorted(self.expected)) or "nothing"
        super().__init__(f"{message} at offset {offset} (expected one of: {exp})")


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)

_ATOM_START = frozenset({"NUMBER", "t", "pi", "e", "(", *FUNCTIONS})
_UNARY_START = _ATOM_START | {"-"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    raw = text.encode("utf-8")
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        offset = len(text[:pos].encode("utf-8"))
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", offset, _UNARY_START)
        kind = m.lastgroup
        value = m.group()
        if kind == "number":
            tokens.append(("NUMBER", value, offset))
        elif kind == "name":
            if value not in ("t", "pi", "e", *FUNCTIONS):
                raise ParseError(f"unknown identifier {value!r}", offset, _ATOM_START)
            tokens.append((value, value, offset))
        elif kind == "op":
            tokens.append((value, value, offset))
        pos = m.end()
    tokens.append(("EOF", "", len(raw)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def kind(self) -> str:
        return self.tokens[self.i][0]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str):
        if self.kind != kind:
            self.fail({kind})
        return self.advance()

    def fail(self, expected):
        kind, value, offset = self.tokens[self.i]
        what = "end of input" if kind == "EOF" else f"token {value!r}"
        raise ParseError(f"unexpected {what}", offset, frozenset(expected))

    def parse(self) -> Expr:
        node = self.expr()
        if self.kind != "EOF":
            self.fail({"+", "-", "*", "/", "^", "EOF"})
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.kind in ("+", "-"):
            op = "add" if self.advance()[0] == "+" else "sub"
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.kind in ("*", "/"):
            op = "mul" if self.advance()[0] == "*" else "div"
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.kind == "-":
            self.advance()
            return Unary("neg", self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.kind == "^":
            self.advance()
            return Binary("pow", base, self.unary())
        return base

    def atom(self) -> Expr:
        kind = self.kind
        if kind == "NUMBER":
            return Const(float(self.advance()[1]))
        if kind == "t":
            self.advance()
            return T
        if kind == "pi":
            self.advance()
            return Const(math.pi)
        if kind == "e":
            self.advance()
            return Const(math.e)
        if kind in FUNCTIONS:
            self.advance()
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Unary(kind, arg)
        if kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.fail(_UNARY_START)


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree.

    Raises:
        ParseError: with the byte offset of the offending token and the set
            of tokens that would have been accepted there.
    """
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# Evaluation


class EvalDomainError(ArithmeticError):
    """Raised when an expression is undefined at ``t``.

    ``cause`` is one of ``log-nonpositive``, ``sqrt-negative``,
    ``division-by-zero`` or ``pow-undefined``.
    """

    CAUSES = ("log-nonpositive", "sqrt-negative", "division-by-zero", "pow-undefined")

    def __init__(self, t: float, cause: str):
        if cause not in self.CAUSES:
            raise ValueError(cause)
        self.t = t
        self.cause = cause
        super().__init__(f"{cause} at t={t!r}")


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _log(x: float, t: float) -> float:
    if x <= 0.0:
        raise EvalDomainError(t, "log-nonpositive")
    return math.log(x)


def _sqrt(x: float, t: float) -> float:
    if x < 0.0:
        raise EvalDomainError(t, "sqrt-negative")
    return math.sqrt(x)


def _div(x: float, y: float, t: float) -> float:
    if y == 0.0:
        raise EvalDomainError(t, "division-by-zero")
    return x / y


def _pow(x: float, y: float, t: float) -> float:
    if x == 0.0 and y < 0.0:
        raise EvalDomainError(t, "pow-undefined")
    if x < 0.0 and not float(y).is_integer():
        raise EvalDomainError(t, "pow-undefined")
    try:
        return math.pow(x, y)
    except OverflowError:
        if x < 0.0 and float(y) % 2.0 == 1.0:
            return -math.inf
        return math.inf


def _apply_unary(op: str, x: float, t: float) -> float:
    if op == "neg":
        return -x
    if op == "sin":
        return math.sin(x)
    if op == "cos":
        return math.cos(x)
    if op == "exp":
        return _exp(x)
    if op == "log":
        return _log(x, t)
    return _sqrt(x, t)


def _apply_binary(op: str, x: float, y: float, t: float) -> float:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return _div(x, y, t)
    return _pow(x, y, t)


def evaluate(e: Expr, t: float) -> float:
    """Value of ``e`` at ``t`` in double precision.

    Raises:
        EvalDomainError: if any node is undefined at ``t``.
    """
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return float(t)
    if isinstance(e, Unary):
        return _apply_unary(e.op, evaluate(e.child, t), t)
    return _apply_binary(e.op, evaluate(e.left, t), evaluate(e.right, t), t)


def lambdify(e: Expr) -> Callable[[float], float]:
    """Compile ``e`` into a closure; same semantics as :func:`evaluate`."""
    if isinstance(e, Const):
        v = e.value
        return lambda t: v
    if isinstance(e, Var):
        return lambda t: float(t)
    if isinstance(e, Unary):
        f = lambdify(e.child)
        op = e.op
        if op == "neg":
            return lambda t: -f(t)
        if op == "sin":
            return lambda t: math.sin(f(t))
        if op == "cos":
            return lambda t: math.cos(f(t))
        if op == "exp":
            return lambda t: _exp(f(t))
        if op == "log":
            return lambda t: _log(f(t), t)
        return lambda t: _sqrt(f(t), t)
    f, g = lambdify(e.left), lambdify(e.right)
    op = e.op
    if op == "add":
        return lambda t: f(t) + g(t)
    if op == "sub":
        return lambda t: f(t) - g(t)
    if op == "mul":
        return lambda t: f(t) * g(t)
    if op == "div":
        return lambda t: _div(f(t), g(t), t)
    return lambda t: _pow(f(t), g(t), t)


# --------------------------------------------------------------------------
# Simplification and differentiation


def _is_const(e: Expr, value: float | None = None) -> bool:
    return isinstance(e, Const) and (value is None or e.value == value)


def _fold(e: Expr) -> Expr:
    # domain errors and non-finite results stay symbolic
    try:
        v = evaluate(e, 0.0)
    except EvalDomainError:
        return e
    if not math.isfinite(v):
        return e
    return Const(v)


def simplify(e: Expr) -> Expr:
    """Constant folding plus the identity rewrites for 0 and 1.

    Only these rules apply: ``x+0``, ``0+x``, ``x-0``, ``x*1``, ``1*x``,
    ``x*0``, ``0*x``, ``0/x``, ``x^1`` and ``x^0`` (with ``0^0 = 1``).
    The result is a fixed point, so ``simplify(simplify(e)) == simplify(e)``.
    """
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, Unary):
        child = simplify(e.child)
        node = Unary(e.op, child)
        return _fold(node) if _is_const(child) else node

    left, right = simplify(e.left), simplify(e.right)
    node = Binary(e.op, left, right)
    if _is_const(left) and _is_const(right):
        folded = _fold(node)
        if folded is not node:
            return folded
    op = e.op
    if op == "add":
        if _is_const(right, 0.0):
            return left
        if _is_const(left, 0.0):
            return right
    elif op == "sub":
        if _is_const(right, 0.0):
            return left
    elif op == "mul":
        if _is_const(left, 0.0) or _is_const(right, 0.0):
            return ZERO
        if _is_const(right, 1.0):
            return left
        if _is_const(left, 1.0):
            return right
    elif op == "div":
        if _is_const(left, 0.0):
            return ZERO
    elif op == "pow":
        if _is_const(right, 0.0):
            return ONE
        if _is_const(right, 1.0):
            return left
    return node


def _d(e: Expr) -> Expr:
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Unary):
        u, du = e.child, _d(e.child)
        if e.op == "neg":
            return -du
        if e.op == "sin":
            return Unary("cos", u) * du
        if e.op == "cos":
            return -(Unary("sin", u)) * du
        if e.op == "exp":
            return e * du
        if e.op == "log":
            return du / u
        return du / (Const(2.0) * e)

    u, v = e.left, e.right
    if e.op == "add":
        return _d(u) + _d(v)
    if e.op == "sub":
        return _d(u) - _d(v)
    if e.op == "mul":
        return _d(u) * v + u * _d(v)
    if e.op == "div":
        return (_d(u) * v - u * _d(v)) / (v ** Const(2.0))
    # pow
    if not depends_on_t(v):
        return v * u ** (v - ONE) * _d(u)
    if not depends_on_t(u):
        return e * Unary("log", u) * _d(v)
    return e * (_d(v) * Unary("log", u) + v * _d(u) / u)


def differentiate(e: Expr) -> Expr:
    """Symbolic d/dt of ``e``, simplified."""
    return simplify(_d(e))


def nth_derivative(e: Expr, n: int) -> Expr:
    if n < 0:
        raise ValueError("derivative order must be nonnegative")
    for _ in range(n):
        e = differentiate(e)
    return e


# --------------------------------------------------------------------------
# Printing

_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}
_SYMBOL = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "^"}


def format_number(v: float) -> str:
    """Shortest round-trip text for ``v``; integral values drop the ``.0``."""
    if float(v).is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(float(v))


def _prec(e: Expr) -> int:
    if isinstance(e, Const):
        return 3 if e.value < 0 else 5
    if isinstance(e, Var):
        return 5
    if isinstance(e, Unary):
        return 3 if e.op == "neg" else 5
    return _PREC[e.op]


def _wrap(e: Expr, min_prec: int) -> str:
    s = to_text(e)
    return f"({s})" if _prec(e) < min_prec else s


def to_text(e: Expr) -> str:
    """Render ``e`` in the input grammar; ``parse(to_text(e))`` evaluates alike."""
    if isinstance(e, Const):
        return format_number(e.value)
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Unary):
        if e.op == "neg":
            return "-" + _wrap(e.child, 4)
        return f"{e.op}({to_text(e.child)})"
    op = e.op
    if op in ("add", "sub"):
        return f"{_wrap(e.left, 1)} {_SYMBOL[op]} {_wrap(e.right, 2)}"
    if op in ("mul", "div"):
        return f"{_wrap(e.left, 2)}{_SYMBOL[op]}{_wrap(e.right, 3)}"
    return f"{_wrap(e.left, 5)}^{_wrap(e.right, 3)}"
