"""Expression grammar for differential polynomials and ring descriptions.

Grammar (whitespace is insignificant)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("-" | "+") unary | power
    power   := postfix ("^" INT)?
    postfix := atom "'"*                 -- only when N = 1
    atom    := INT | NAME | DOP "(" expr ")" | "(" expr ")"
    DOP     := "d" INT ("^" INT)?

Division is only allowed by a nonzero element of the coefficient field.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import NamedTuple

from .core import DiffPolynomial, RingConfig
from .errors import (
    DerivationIndexOutOfRange,
    DivisionByZero,
    ExpressionSyntaxError,
    InvalidRing,
    UnknownVariable,
)
from .fields import FunctionField, Rationals, parse_field


class Token(NamedTuple):
    kind: str
    value: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>\*\*|[-+*/^()'])"
)


def tokenize(src: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if not m:
            raise ExpressionSyntaxError(f"unexpected character {src[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        if kind == "ws":
            for k, ch in enumerate(text):
                if ch == "\n":
                    line += 1
                    line_start = pos + k + 1
        else:
            if text == "**":
                text = "^"
            tokens.append(Token(kind, text, line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


_DOP = re.compile(r"d(\d+)$")


class _Parser:
    def __init__(self, src: str, ring: RingConfig):
        self.ring = ring
        self.tokens = tokenize(src)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ExpressionSyntaxError(msg, tok.line, tok.column)

    def accept(self, value) -> Token | None:
        if self.tok.kind == "op" and self.tok.value == value:
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, value) -> Token:
        t = self.accept(value)
        if t is None:
            found = self.tok.value or "end of input"
            raise self.error(f"expected {value!r}, found {found!r}")
        return t

    def integer(self) -> int:
        if self.tok.kind != "num":
            raise self.error("expected an integer")
        v = int(self.tok.value)
        self.i += 1
        return v

    def parse(self) -> DiffPolynomial:
        p = self.expr()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.value!r}")
        return p

    def expr(self):
        p = self.term()
        while True:
            if self.accept("+"):
                p = p + self.term()
            elif self.accept("-"):
                p = p - self.term()
            else:
                return p

    def term(self):
        p = self.unary()
        while True:
            if self.accept("*"):
                p = p * self.unary()
            elif self.tok.kind == "op" and self.tok.value == "/":
                t = self.tok
                self.i += 1
                q = self.unary()
                if not q.is_number():
                    raise self.error("division by a non-constant expression", t)
                c = q.constant_coefficient()
                if not c:
                    raise DivisionByZero(f"division by zero (line {t.line}, column {t.column})")
                p = p.scale(1 / c)
            else:
                return p

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.postfix()
        if self.accept("^"):
            return base ** self.integer()
        return base

    def postfix(self):
        p = self.atom()
        while self.tok.kind == "op" and self.tok.value == "'":
            if self.ring.n_derivations != 1:
                raise self.error("the ' shorthand needs exactly one derivation")
            self.i += 1
            p = p.derive(1)
        return p

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return self.ring.const(int(tok.value))
        if self.accept("("):
            p = self.expr()
            self.expect(")")
            return p
        if tok.kind == "name":
            self.i += 1
            m = _DOP.match(tok.value)
            if m and tok.value not in self.ring.variables and tok.value not in self.ring.parameters:
                return self.derivative(int(m.group(1)), tok)
            return self.name(tok)
        raise self.error(f"unexpected {tok.value or 'end of input'!r}")

    def derivative(self, i: int, tok: Token):
        N = self.ring.n_derivations
        if not 1 <= i <= N:
            raise DerivationIndexOutOfRange(
                f"d{i} used with N={N} (line {tok.line}, column {tok.column})"
            )
        e = self.integer() if self.accept("^") else 1
        self.expect("(")
        p = self.expr()
        self.expect(")")
        for _ in range(e):
            p = p.derive(i)
        return p

    def name(self, tok: Token):
        ring = self.ring
        if tok.value in ring.variables or tok.value in ring.parameters:
            return ring.var(tok.value)
        fld = ring.coefficient_field
        if isinstance(fld, FunctionField) and tok.value in fld.names:
            return ring.const(fld.gen(fld.names.index(tok.value) + 1))
        raise UnknownVariable(f"unknown variable {tok.value!r} (line {tok.line}, column {tok.column})")


def parse_expression(src: str, ring: RingConfig) -> DiffPolynomial:
    return _Parser(src, ring).parse()


def parse_expressions(text: str, ring: RingConfig) -> list[DiffPolynomial]:
    """One expression per nonblank line; ``#`` starts a comment."""
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        if not line.strip():
            continue
        try:
            out.append(parse_expression(line, ring))
        except ExpressionSyntaxError as e:
            raise ExpressionSyntaxError(e.args[0].rsplit(" (line", 1)[0], lineno, e.column) from None
    return out


def _split_top(s: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def parse_ring(spec: str) -> RingConfig:
    """Read ``N=2,vars=y1,y2,params=u,field=Q`` style ring descriptions.

    Bare items continue the list of the preceding key, so ``vars=y1,y2``
    declares two unknowns.  ``field`` is ``Q``, ``GF(p)`` or ``Q(t1,t2)``.
    """
    keys: dict[str, list[str]] = {}
    last = None
    for item in _split_top(spec):
        if "=" in item:
            k, v = item.split("=", 1)
            last = k.strip().lower()
            keys.setdefault(last, []).append(v.strip())
        elif last in ("vars", "params"):
            keys[last].append(item)
        else:
            raise InvalidRing(f"cannot read ring item {item!r}")
    unknown = set(keys) - {"n", "vars", "params", "field"}
    if unknown:
        raise InvalidRing(f"unknown ring keys {sorted(unknown)}")
    try:
        n = int(keys.get("n", ["1"])[0])
    except ValueError:
        raise InvalidRing("N must be an integer")
    variables = tuple(v for v in keys.get("vars", ["y"]) if v)
    params = tuple(v for v in keys.get("params", []) if v)
    fld = parse_field(keys["field"][0]) if "field" in keys else Rationals()
    return RingConfig(n, variables, fld, params)


def format_rational(q: Fraction) -> str:
    return str(q)
