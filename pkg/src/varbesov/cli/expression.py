"""Expression language for exponents, weights and set functions.

Grammar (``^`` is right-associative and binds tighter than unary minus)::

    sum     := product (('+' | '-') product)*
    product := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' unary)?
    primary := NUMBER | NAME | NAME '(' sum (',' sum)* ')' | '(' sum ')'

Names are the variables ``x``, ``y`` (two dimensions only), ``r``, ``j`` when
enabled, the constants ``pi`` and ``e``, and the functions ``sin cos exp log
abs`` (one argument), ``min max`` (two) and ``clamp(v, lo, hi)``.  Errors
carry the byte offset of the offending token in the UTF-8 source.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = ["ExpressionError", "Expression", "parse_expression", "FUNCTIONS", "CONSTANTS"]

FUNCTIONS: dict[str, tuple[int, Callable]] = {
    "sin": (1, np.sin),
    "cos": (1, np.cos),
    "exp": (1, np.exp),
    "log": (1, np.log),
    "abs": (1, np.abs),
    "min": (2, np.minimum),
    "max": (2, np.maximum),
    "clamp": (3, lambda v, lo, hi: np.minimum(np.maximum(v, lo), hi)),
}
CONSTANTS = {"pi": math.pi, "e": math.e}


class ExpressionError(ValueError):
    """Syntax or name error at a byte offset of the source text."""

    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at byte offset {offset}")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


_TOKEN = re.compile(r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
                    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),]))")

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _fmt_num(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def _prec(node) -> int:
    if isinstance(node, Bin):
        return 4 if node.op == "^" else _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Num) and node.value < 0:
        return 3
    return 5


def _pretty(node) -> str:
    if isinstance(node, Num):
        return _fmt_num(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.name}(" + ", ".join(_pretty(a) for a in node.args) + ")"
    if isinstance(node, Neg):
        inner = _pretty(node.arg)
        return "-" + (f"({inner})" if _prec(node.arg) < 3 else inner)
    p = _prec(node)
    left, right = _pretty(node.left), _pretty(node.right)
    if node.op == "^":
        if _prec(node.left) <= 4:
            left = f"({left})"
        if _prec(node.right) < 3:
            right = f"({right})"
        return f"{left}^{right}"
    if _prec(node.left) < p:
        left = f"({left})"
    if _prec(node.right) <= p:
        right = f"({right})"
    return f"{left} {node.op} {right}"


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.variables = set(variables)
        self.tokens = self._tokenize(text)
        self.i = 0

    def _offset(self, char_index: int) -> int:
        return len(self.text[:char_index].encode("utf-8"))

    def _tokenize(self, text: str):
        out = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                bad = len(text[pos:]) - len(text[pos:].lstrip())
                raise ExpressionError(f"unexpected character {text[pos + bad]!r}",
                                      self._offset(pos + bad), text)
            kind = m.lastgroup
            out.append((kind, m.group(kind), self._offset(m.start(kind))))
            pos = m.end()
        out.append(("end", "", self._offset(len(text))))
        return out

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str, opened_at: int | None = None):
        kind, val, off = self.peek()
        if val != value:
            if value == ")" and opened_at is not None:
                raise ExpressionError("unbalanced parenthesis: '(' is never closed",
                                      opened_at, self.text)
            raise ExpressionError(f"expected {value!r}, found {val or 'end of input'!r}",
                                  off, self.text)
        return self.take()

    def parse(self):
        node = self.sum()
        kind, val, off = self.peek()
        if kind != "end":
            if val == ")":
                raise ExpressionError("unbalanced parenthesis: unmatched ')'", off, self.text)
            raise ExpressionError(f"unexpected token {val!r}", off, self.text)
        return node

    def sum(self):
        node = self.product()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = Bin(op, node, self.product())
        return node

    def product(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = Bin(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[1] == "-" and self.peek()[0] == "op":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.primary()
        if self.peek()[1] == "^":
            self.take()
            return Bin("^", base, self.unary())
        return base

    def primary(self):
        kind, val, off = self.take()
        if kind == "num":
            return Num(float(val))
        if kind == "name":
            if self.peek()[1] == "(":
                if val not in FUNCTIONS:
                    raise ExpressionError(f"unknown identifier {val!r}", off, self.text)
                open_off = self.take()[2]
                args = [self.sum()]
                while self.peek()[1] == ",":
                    self.take()
                    args.append(self.sum())
                self.expect(")", open_off)
                arity = FUNCTIONS[val][0]
                if len(args) != arity:
                    raise ExpressionError(
                        f"{val} takes {arity} argument{'s' if arity > 1 else ''}, "
                        f"got {len(args)}", off, self.text)
                return Call(val, tuple(args))
            if val in FUNCTIONS:
                raise ExpressionError(f"function {val!r} used without arguments", off, self.text)
            if val in CONSTANTS:
                return Var(val)
            if val not in self.variables:
                raise ExpressionError(f"unknown identifier {val!r}", off, self.text)
            return Var(val)
        if val == "(":
            node = self.sum()
            self.expect(")", off)
            return node
        if kind == "end":
            raise ExpressionError("unexpected end of input", off, self.text)
        if val == ")":
            raise ExpressionError("unbalanced parenthesis: unmatched ')'", off, self.text)
        raise ExpressionError(f"unexpected token {val!r}", off, self.text)


def _eval(node, env: dict):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return CONSTANTS[node.name] if node.name in CONSTANTS else env[node.name]
    if isinstance(node, Neg):
        return -_eval(node.arg, env)
    if isinstance(node, Call):
        return FUNCTIONS[node.name][1](*(_eval(a, env) for a in node.args))
    a, b = _eval(node.left, env), _eval(node.right, env)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        return np.divide(a, b)
    return np.power(np.asarray(a, dtype=float), b)


def _names(node, out: set) -> set:
    if isinstance(node, Var) and node.name not in CONSTANTS:
        out.add(node.name)
    for child in getattr(node, "args", ()) or ():
        _names(child, out)
    for attr in ("arg", "left", "right"):
        if hasattr(node, attr):
            _names(getattr(node, attr), out)
    return out


@dataclass(frozen=True)
class Expression:
    """A parsed expression with its source text and syntax tree."""

    source: str
    tree: object
    variables: tuple[str, ...]

    def __str__(self) -> str:
        return _pretty(self.tree)

    @property
    def free_names(self) -> set[str]:
        return _names(self.tree, set())

    def evaluate(self, **env) -> np.ndarray:
        missing = self.free_names - set(env)
        if missing:
            raise ValueError(f"no value for {sorted(missing)}")
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return np.asarray(_eval(self.tree, env), dtype=float)

    def as_field(self) -> Callable[..., np.ndarray]:
        """Callable ``f(*coords)`` binding ``x``, ``y`` and ``r = |x|``."""
        def fn(*coords):
            env = {"x": coords[0], "r": np.sqrt(sum(np.asarray(c) ** 2 for c in coords))}
            if len(coords) > 1:
                env["y"] = coords[1]
            shape = np.broadcast(*coords).shape
            return np.broadcast_to(self.evaluate(**{k: v for k, v in env.items()
                                                    if k in self.free_names}), shape)
        return fn


def parse_expression(text: str, variables: Sequence[str] = ("x", "r")) -> Expression:
    """Parse ``text``; names outside ``variables``, constants and functions are rejected."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    tree = _Parser(text, variables).parse()
    return Expression(text, tree, tuple(variables))
