"""Coefficient fields: Q, F_p and the differential field Q(t1..tk).

Elements of Q are ``fractions.Fraction``; elements of F_p are :class:`GF`;
elements of Q(t1..tk) are :class:`RationalFunction`.  Every field object
knows how to convert plain integers/fractions, how to differentiate its
elements, and how to print them in the expression grammar.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring as _sympy_ring

from .errors import DivisionByZero, InvalidRing


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class GF:
    """Residue class modulo a prime ``p``."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, GF):
            if other.p != self.p:
                raise InvalidRing(f"cannot mix GF({self.p}) and GF({other.p})")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else GF(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else GF(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else GF(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else GF(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return GF(-self.value, self.p)

    def inverse(self) -> GF:
        if self.value == 0:
            raise DivisionByZero("division by zero in GF(%d)" % self.p)
        return GF(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * GF(o, self.p).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return GF(pow(self.value, n, self.p), self.p)

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, GF):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return (other - self.value) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash(("GF", self.value, self.p))

    def __repr__(self):
        return f"GF({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


@lru_cache(maxsize=None)
def _polyring(names: tuple[str, ...]):
    R, *_ = _sympy_ring(",".join(names), QQ, grlex)
    return R


def _format_ratpoly(p) -> str:
    """Print a sympy PolyElement over QQ in the expression grammar."""
    if not p:
        return "0"
    names = [str(g) for g in p.ring.gens]
    parts = []
    for monom, c in p.terms():
        c = Fraction(int(c.numerator), int(c.denominator))
        factors = []
        for name, e in zip(names, monom):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if factors:
            body = "*".join(factors) if mag == 1 else f"{mag}*" + "*".join(factors)
        else:
            body = str(mag)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


def _group(s: str) -> str:
    return f"({s})" if any(ch in s for ch in " */") else s


class RationalFunction:
    """Element of Q(t1..tk) kept as a reduced fraction with monic denominator.

    Numerator and denominator are sympy ``PolyElement`` objects over QQ in
    graded-lex order; the denominator's grlex-leading coefficient is 1, so
    equal functions have identical representations.
    """

    __slots__ = ("field", "num", "den")

    def __init__(self, field: "FunctionField", num, den=None, *, normalized=False):
        R = field.polyring
        if den is None:
            den = R.one
        if not den:
            raise DivisionByZero("zero denominator")
        if not normalized:
            if not num:
                den = R.one
            else:
                _, num, den = num.cofactors(den)
            lc = den.LC
            if lc != 1:
                num = num.quo_ground(lc)
                den = den.quo_ground(lc)
        self.field = field
        self.num = num
        self.den = den

    # -- coercion -----------------------------------------------------
    def _lift(self, other):
        if isinstance(other, RationalFunction):
            if other.field != self.field:
                raise InvalidRing("rational functions over different parameter sets")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.convert(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RationalFunction(self.field, self.num + o.num, self.den)
        return RationalFunction(self.field, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(self.field, -self.num, self.den, normalized=True)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.field, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if not self.num:
            raise DivisionByZero("division by the zero rational function")
        return RationalFunction(self.field, self.den, self.num)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.field, self.num**n, self.den**n, normalized=True)

    def derive(self, i: int) -> RationalFunction:
        """Partial derivative with respect to the i-th parameter (1-based)."""
        if not 1 <= i <= len(self.field.names):
            return self.field.zero
        g = self.field.polyring.gens[i - 1]
        dn = self.num.diff(g)
        dd = self.den.diff(g)
        return RationalFunction(self.field, dn * self.den - self.num * dd, self.den**2)

    # -- predicates ---------------------------------------------------
    def __bool__(self):
        return bool(self.num)

    def is_constant(self) -> bool:
        return self.num.is_ground and self.den.is_ground

    def constant_value(self) -> Fraction:
        c = self.num.LC if self.num else 0
        return Fraction(int(c.numerator), int(c.denominator)) if c else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.field == other.field and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash((self.field.names, tuple(self.num.terms()), tuple(self.den.terms())))

    @property
    def numerator(self):
        return self.num

    @property
    def denominator(self):
        return self.den

    def degrees(self) -> tuple[int, int]:
        """Total degrees of numerator and denominator (numerator 0 -> -1)."""
        dn = max((sum(m) for m in self.num.monoms()), default=-1) if self.num else -1
        dd = max(sum(m) for m in self.den.monoms())
        return dn, dd

    def is_negative(self) -> bool:
        """True when the printed form starts with a minus sign."""
        return bool(self.num) and self.num.LC < 0

    def __str__(self):
        if self.is_negative():
            return "-" + str(-self)
        num = _format_ratpoly(self.num)
        if self.den == 1:
            return num
        den = _format_ratpoly(self.den)
        return f"{_group(num)}/{_group(den)}"

    def __repr__(self):
        return f"RationalFunction({self})"


# ----------------------------------------------------------------------
# field objects
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Rationals:
    characteristic = 0

    def convert(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise InvalidRing(f"cannot convert {x!r} to a rational number")

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def derive(self, c, i):
        return Fraction(0)

    def is_number(self, c) -> bool:
        return True

    def number_value(self, c) -> Fraction:
        return c

    def __str__(self):
        return "Q"


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise InvalidRing(f"{self.p} is not prime")

    @property
    def characteristic(self):
        return self.p

    def convert(self, x) -> GF:
        if isinstance(x, GF):
            if x.p != self.p:
                raise InvalidRing("element of a different prime field")
            return x
        if isinstance(x, int):
            return GF(x, self.p)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise DivisionByZero(f"{x} has no image in GF({self.p})")
            return GF(x.numerator * pow(x.denominator, -1, self.p), self.p)
        raise InvalidRing(f"cannot convert {x!r} to GF({self.p})")

    @property
    def zero(self):
        return GF(0, self.p)

    @property
    def one(self):
        return GF(1, self.p)

    def derive(self, c, i):
        return GF(0, self.p)

    def is_number(self, c) -> bool:
        return True

    def number_value(self, c):
        return c

    def __str__(self):
        return f"GF({self.p})"


@dataclass(frozen=True)
class FunctionField:
    """Q(t1..tk) with the commuting derivations d/dt_i.

    Derivation number i acts as d/dt_i for i <= k and as zero beyond k.
    """

    names: tuple[str, ...]
    characteristic = 0

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if not self.names or len(set(self.names)) != len(self.names):
            raise InvalidRing("function field needs distinct parameter names")

    @classmethod
    def standard(cls, k: int) -> FunctionField:
        return cls(tuple(f"t{i}" for i in range(1, k + 1)))

    @property
    def polyring(self):
        return _polyring(self.names)

    def gen(self, i: int) -> RationalFunction:
        return RationalFunction(self, self.polyring.gens[i - 1], normalized=True)

    def convert(self, x) -> RationalFunction:
        if isinstance(x, RationalFunction):
            if x.field != self:
                raise InvalidRing("rational function over a different parameter set")
            return x
        if isinstance(x, (int, Fraction)):
            x = Fraction(x)
            return RationalFunction(self, self.polyring(QQ(x.numerator, x.denominator)), normalized=True)
        raise InvalidRing(f"cannot convert {x!r} to {self}")

    @property
    def zero(self):
        return RationalFunction(self, self.polyring.zero, normalized=True)

    @property
    def one(self):
        return RationalFunction(self, self.polyring.one, normalized=True)

    def derive(self, c: RationalFunction, i: int) -> RationalFunction:
        return c.derive(i)

    def is_number(self, c) -> bool:
        return c.is_constant()

    def number_value(self, c) -> Fraction:
        return c.constant_value()

    def __str__(self):
        return "Q(" + ",".join(self.names) + ")"


CoefficientField = Rationals | PrimeField | FunctionField


def parse_field(text: str) -> CoefficientField:
    """Read ``Q``, ``GF(p)``/``Fp`` or ``Q(t1,t2)`` (also ``Q(k=2)``)."""
    s = text.strip().replace(" ", "")
    if s in ("Q", "QQ"):
        return Rationals()
    low = s.lower()
    if low.startswith("gf(") and s.endswith(")"):
        return PrimeField(int(s[3:-1]))
    if low.startswith("f") and s[1:].isdigit():
        return PrimeField(int(s[1:]))
    if s.startswith("Q(") and s.endswith(")"):
        inner = s[2:-1]
        if inner.startswith("k="):
            return FunctionField.standard(int(inner[2:]))
        return FunctionField(tuple(inner.split(",")))
    raise InvalidRing(f"unknown coefficient field {text!r}")
