"""A small single-variable expression language.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := unary ("^" factor)?          # right-associative
    unary  := "-" unary | atom
    atom   := NUMBER | "x" | "pi" | "e" | FUNC "(" expr ")" | "(" expr ")"

``FUNC`` is one of sin, cos, tan, exp, ln, sqrt, abs, atan (and ``sign``,
which only the differentiator needs to emit).

Typical use::

    >>> f = parse("x*sin(x)")
    >>> evaluate(differentiate(f), 0.0)
    0.0
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Union

import numpy as np

from .core import DerivativeBounds, FunctionModel, Interval
from .errors import DomainError, ParseError

FUNCTIONS = ("sin", "cos", "tan", "exp", "ln", "sqrt", "abs", "atan", "sign")
CONSTANTS = {"pi": math.pi, "e": math.e}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Ast"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Ast"
    right: "Ast"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Ast"


Ast = Union[Num, Var, Const, Neg, BinOp, Call]
X = Var()

# ---------------------------------------------------------------------------
# lexing and parsing

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<pow2>\*\*)
  | (?P<op>[-+*/^()−])
    """,
    re.VERBOSE,
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(pos, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        if kind == "pow2":
            raise ParseError(pos, "'**' is not an operator (use '^')")
        if kind != "ws":
            value = m.group()
            if value == "−":
                value = "-"
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def _fail(self, what):
        kind, value, pos = self.tok
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(pos, f"expected {what}, found {found}")

    def _take(self, value):
        if self.tok[1] == value and self.tok[0] == "op":
            self.i += 1
            return True
        return False

    def parse(self):
        node = self.expr()
        if self.tok[0] != "end":
            self._fail("operator or end of input")
        return node

    def expr(self):
        node = self.term()
        while self.tok[0] == "op" and self.tok[1] in "+-":
            op = self.tok[1]
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.tok[0] == "op" and self.tok[1] in "*/":
            op = self.tok[1]
            self.i += 1
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        base = self.unary()
        if self._take("^"):
            return BinOp("^", base, self.factor())
        return base

    def unary(self):
        if self._take("-"):
            return Neg(self.unary())
        return self.atom()

    def atom(self):
        kind, value, pos = self.tok
        if kind == "num":
            self.i += 1
            return Num(float(value))
        if kind == "name":
            self.i += 1
            if value == "x":
                return X
            if value in CONSTANTS:
                return Const(value)
            if value in FUNCTIONS:
                if not self._take("("):
                    self._fail(f"'(' after {value}")
                arg = self.expr()
                if not self._take(")"):
                    self._fail("')'")
                return Call(value, arg)
            raise ParseError(pos, f"unknown name {value!r}")
        if self._take("("):
            node = self.expr()
            if not self._take(")"):
                self._fail("')'")
            return node
        self._fail("number, x, constant, function or '('")


def parse(text: str) -> Ast:
    """Parse ``text``; raises :class:`ParseError` at the first bad offset."""
    return _Parser(text).parse()


def to_string(node: Ast) -> str:
    """Fully parenthesized text that :func:`parse` maps back to ``node``."""
    if isinstance(node, Num):
        s = repr(node.value)
        return f"({s})" if node.value < 0 else s
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_string(node.arg)})"
    if isinstance(node, BinOp):
        return f"({to_string(node.left)} {node.op} {to_string(node.right)})"
    return f"{node.func}({to_string(node.arg)})"


# ---------------------------------------------------------------------------
# evaluation


def _pow(base, exponent):
    if base == 0.0 and exponent < 0:
        raise DomainError("0 raised to a negative power")
    if base < 0 and exponent != math.floor(exponent):
        raise DomainError(f"negative base {base!r} with non-integer exponent {exponent!r}")
    try:
        return math.pow(base, exponent)
    except OverflowError as exc:
        raise DomainError(f"overflow in {base!r}^{exponent!r}") from exc


def _div(num, den):
    if den == 0.0:
        raise DomainError("division by zero")
    return num / den


def _ln(u):
    if u <= 0.0:
        raise DomainError(f"ln of non-positive value {u!r}")
    return math.log(u)


def _sqrt(u):
    if u < 0.0:
        raise DomainError(f"sqrt of negative value {u!r}")
    return math.sqrt(u)


def _exp(u):
    try:
        return math.exp(u)
    except OverflowError as exc:
        raise DomainError(f"exp overflow at {u!r}") from exc


def _sign(u):
    return (u > 0) - (u < 0)


_SCALAR_FUNCS = {
    "sin": math.sin, "cos": math.cos, "tan": math.tan, "exp": _exp,
    "ln": _ln, "sqrt": _sqrt, "abs": abs, "atan": math.atan, "sign": _sign,
}

_SCALAR_OPS = {
    "+": lambda l, r: l + r,
    "-": lambda l, r: l - r,
    "*": lambda l, r: l * r,
    "/": _div,
    "^": _pow,
}


def _compile_scalar(node):
    if isinstance(node, Num):
        v = node.value
        return lambda x: v
    if isinstance(node, Var):
        return lambda x: x
    if isinstance(node, Const):
        v = CONSTANTS[node.name]
        return lambda x: v
    if isinstance(node, Neg):
        f = _compile_scalar(node.arg)
        return lambda x: -f(x)
    if isinstance(node, BinOp):
        l, r = _compile_scalar(node.left), _compile_scalar(node.right)
        op = node.op
        if op == "+":
            return lambda x: l(x) + r(x)
        if op == "-":
            return lambda x: l(x) - r(x)
        if op == "*":
            return lambda x: l(x) * r(x)
        fn = _SCALAR_OPS[op]
        return lambda x: fn(l(x), r(x))
    f, fn = _compile_scalar(node.arg), _SCALAR_FUNCS[node.func]
    return lambda x: fn(f(x))


def _check(mask, message):
    if np.any(mask):
        raise DomainError(message)


def _vec_pow(base, exponent):
    base, exponent = np.broadcast_arrays(base, exponent)
    _check((base == 0) & (exponent < 0), "0 raised to a negative power")
    _check((base < 0) & (exponent != np.floor(exponent)), "negative base with non-integer exponent")
    return np.power(base, exponent)


def _vec_div(num, den):
    _check(np.asarray(den) == 0, "division by zero")
    return num / den


def _vec_ln(u):
    _check(np.asarray(u) <= 0, "ln of non-positive value")
    return np.log(u)


def _vec_sqrt(u):
    _check(np.asarray(u) < 0, "sqrt of negative value")
    return np.sqrt(u)


_VECTOR_FUNCS = {
    "sin": np.sin, "cos": np.cos, "tan": np.tan, "exp": np.exp, "ln": _vec_ln,
    "sqrt": _vec_sqrt, "abs": np.abs, "atan": np.arctan, "sign": np.sign,
}

_VECTOR_OPS = {
    "+": np.add, "-": np.subtract, "*": np.multiply, "/": _vec_div, "^": _vec_pow,
}


def _compile_vector(node):
    if isinstance(node, (Num, Const)):
        v = node.value if isinstance(node, Num) else CONSTANTS[node.name]
        return lambda x: np.full(np.shape(x), v)
    if isinstance(node, Var):
        return lambda x: x
    if isinstance(node, Neg):
        f = _compile_vector(node.arg)
        return lambda x: -f(x)
    if isinstance(node, BinOp):
        l, r, fn = _compile_vector(node.left), _compile_vector(node.right), _VECTOR_OPS[node.op]
        return lambda x: fn(l(x), r(x))
    f, fn = _compile_vector(node.arg), _VECTOR_FUNCS[node.func]
    return lambda x: fn(f(x))


@lru_cache(maxsize=256)
def compile_expr(node: Ast) -> Callable[[float], float]:
    """Compile ``node`` to a fast scalar function.

    The returned callable carries a ``vectorized`` attribute that evaluates
    a numpy array at once, raising :class:`DomainError` if any element falls
    outside the real domain or the result is not finite.
    """
    scalar = _compile_scalar(node)
    vector = _compile_vector(node)

    def f(x):
        return float(scalar(float(x)))

    def fv(xs):
        xs = np.asarray(xs, dtype=float)
        with np.errstate(all="ignore"):
            out = np.asarray(vector(xs), dtype=float)
        if not np.all(np.isfinite(out)):
            raise DomainError("non-finite value")
        return out

    f.vectorized = fv
    return f


def evaluate(node: Ast, x: float) -> float:
    return compile_expr(node)(x)


# ---------------------------------------------------------------------------
# differentiation

ZERO, ONE, TWO = Num(0.0), Num(1.0), Num(2.0)


def has_x(node: Ast) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, (Num, Const)):
        return False
    if isinstance(node, Neg):
        return has_x(node.arg)
    if isinstance(node, BinOp):
        return has_x(node.left) or has_x(node.right)
    return has_x(node.arg)


def _fold(op, l, r):
    if isinstance(l, Num) and isinstance(r, Num):
        try:
            v = _SCALAR_OPS[op](l.value, r.value)
        except (DomainError, OverflowError):
            return None
        if math.isfinite(v):
            return Num(float(v))
    return None


def _neg(u):
    if isinstance(u, Num):
        return Num(-u.value)
    if isinstance(u, Neg):
        return u.arg
    return Neg(u)


def _add(u, v):
    if u == ZERO:
        return v
    if v == ZERO:
        return u
    return _fold("+", u, v) or BinOp("+", u, v)


def _sub(u, v):
    if v == ZERO:
        return u
    if u == ZERO:
        return _neg(v)
    return _fold("-", u, v) or BinOp("-", u, v)


def _mul(u, v):
    if u == ZERO or v == ZERO:
        return ZERO
    if u == ONE:
        return v
    if v == ONE:
        return u
    return _fold("*", u, v) or BinOp("*", u, v)


def _div_node(u, v):
    if u == ZERO:
        return ZERO
    if v == ONE:
        return u
    return _fold("/", u, v) or BinOp("/", u, v)


def _pow_node(u, v):
    if v == ZERO:
        return ONE
    if v == ONE:
        return u
    return _fold("^", u, v) or BinOp("^", u, v)


def differentiate(node: Ast) -> Ast:
    """Symbolic derivative with respect to ``x``.

    ``abs`` differentiates to ``sign(u) * u'`` with ``sign(0) = 0``.
    """
    if isinstance(node, (Num, Const)):
        return ZERO
    if isinstance(node, Var):
        return ONE
    if isinstance(node, Neg):
        return _neg(differentiate(node.arg))
    if isinstance(node, BinOp):
        u, v = node.left, node.right
        du, dv = differentiate(u), differentiate(v)
        if node.op == "+":
            return _add(du, dv)
        if node.op == "-":
            return _sub(du, dv)
        if node.op == "*":
            return _add(_mul(du, v), _mul(u, dv))
        if node.op == "/":
            return _div_node(_sub(_mul(du, v), _mul(u, dv)), _pow_node(v, TWO))
        # power
        if not has_x(v):
            return _mul(_mul(v, _pow_node(u, _sub(v, ONE))), du)
        if not has_x(u):
            return _mul(_mul(node, Call("ln", u)), dv)
        return _mul(node, _add(_mul(dv, Call("ln", u)), _div_node(_mul(v, du), u)))
    u = node.arg
    du = differentiate(u)
    f = node.func
    if f == "sin":
        outer = Call("cos", u)
    elif f == "cos":
        outer = _neg(Call("sin", u))
    elif f == "tan":
        outer = _add(ONE, _pow_node(Call("tan", u), TWO))
    elif f == "exp":
        outer = node
    elif f == "ln":
        return _div_node(du, u)
    elif f == "sqrt":
        return _div_node(du, _mul(TWO, node))
    elif f == "abs":
        outer = Call("sign", u)
    elif f == "atan":
        return _div_node(du, _add(ONE, _pow_node(u, TWO)))
    else:  # sign
        return ZERO
    return _mul(outer, du)


# ---------------------------------------------------------------------------
# derivative ranges and function models


def chebyshev_points(iv: Interval, n: int) -> np.ndarray:
    """``n`` Chebyshev nodes of ``iv`` plus both endpoints, ascending."""
    k = np.arange(n)
    nodes = iv.mid + 0.5 * iv.width * np.cos((2 * k + 1) * np.pi / (2 * n))
    return np.concatenate(([iv.a], nodes[::-1], [iv.b]))


def _sample(f, ts):
    vec = getattr(f, "vectorized", None)
    if vec is not None:
        return vec(ts)
    out = np.array([f(float(t)) for t in ts], dtype=float)
    if not np.all(np.isfinite(out)):
        raise DomainError("non-finite derivative sample")
    return out


def derivative_range(fprime, iv: Interval, n: int = 1024, inflation: float = 0.05,
                     exact: bool = False, pad: float = 1e-12) -> DerivativeBounds:
    """Estimate ``(gamma, Gamma)`` by sampling ``fprime`` at Chebyshev nodes.

    Each side is widened by ``inflation * (max - min) + pad``.  Pass
    ``exact=True`` only when the sampled extremes are known to be the true
    ones (e.g. a monotone derivative).
    """
    if n < 2:
        raise ValueError("need n >= 2 sample points")
    if inflation < 0 or pad < 0:
        raise ValueError("inflation and pad must be non-negative")
    if not callable(fprime):
        fprime = compile_expr(fprime)
    vals = _sample(fprime, chebyshev_points(iv, n))
    lo, hi = float(vals.min()), float(vals.max())
    pad = inflation * (hi - lo) + pad
    return DerivativeBounds(lo - pad, hi + pad, "exact" if exact else "sampled-inflated")


def function_model(text: str, iv: Interval) -> FunctionModel:
    """Parse ``text`` and bundle it with its symbolic derivative."""
    ast = parse(text)
    return FunctionModel(
        eval=compile_expr(ast),
        deriv_eval=compile_expr(differentiate(ast)),
        domain=iv,
        description=text,
    )
