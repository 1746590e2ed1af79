"""Differential polynomial rings with N commuting derivations.

A ring ``R{y_1..y_m}`` is described by a :class:`RingConfig`.  Besides the
unknowns ``y_j`` a ring may carry *parameters*: differential indeterminates
``u_1..u_r`` of the coefficient ring, so that R = K{u_1..u_r} for a
coefficient field K.  Parameters are never leaders; everything built from
them (and from K) is a coefficient from the point of view of ranking.

Polynomials are sparse maps from monomials to nonzero field elements and
are immutable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, NamedTuple

from .errors import (
    ConstantPolynomial,
    DerivationIndexOutOfRange,
    InvalidRing,
    RingMismatch,
)
from .fields import GF, FunctionField, PrimeField, RationalFunction, Rationals
from fractions import Fraction

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
_DOP_RE = re.compile(r"d[0-9]+$")


class DiffVariable(NamedTuple):
    """``d_1^e_1 ... d_N^e_N`` applied to a base variable.

    ``var_index`` is 1-based for unknowns and negative (-1, -2, ...) for
    parameters of the coefficient ring.
    """

    var_index: int
    exponents: tuple[int, ...]

    @property
    def order(self) -> int:
        return sum(self.exponents)

    @property
    def is_unknown(self) -> bool:
        return self.var_index > 0

    def derive(self, i: int) -> DiffVariable:
        e = list(self.exponents)
        e[i - 1] += 1
        return DiffVariable(self.var_index, tuple(e))

    def is_derivative_of(self, other: DiffVariable) -> bool:
        return self.var_index == other.var_index and all(
            a >= b for a, b in zip(self.exponents, other.exponents)
        )

    def is_proper_derivative_of(self, other: DiffVariable) -> bool:
        return self != other and self.is_derivative_of(other)

    def theta_over(self, other: DiffVariable) -> tuple[int, ...]:
        """The operator taking ``other`` to ``self`` as an exponent vector."""
        return tuple(a - b for a, b in zip(self.exponents, other.exponents))


class Rank(NamedTuple):
    total_order: int
    var_index: int
    exponents: tuple[int, ...]

    def flat(self) -> tuple[int, ...]:
        """The (N+2)-tuple (sum e_i, j, e_1, ..., e_N)."""
        return (self.total_order, self.var_index) + tuple(self.exponents)


def rank_of(v: DiffVariable) -> Rank:
    return Rank(sum(v.exponents), v.var_index, v.exponents)


@lru_cache(maxsize=None)
def _var_key(v: DiffVariable):
    # parameters sort below every unknown
    return (v.var_index > 0, sum(v.exponents), v.var_index, v.exponents)


def _mono_key(mono):
    return tuple((_var_key(v), e) for v, e in reversed(mono))


def _print_key(mono):
    if not mono:
        return ((), 0, ())
    return (_var_key(mono[-1][0]), sum(e for _, e in mono), _mono_key(mono))


@lru_cache(maxsize=1 << 16)
def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items(), key=lambda ve: _var_key(ve[0])))


def _mono_remove(mono, v, k=1):
    out = []
    for w, e in mono:
        if w == v:
            if e > k:
                out.append((w, e - k))
        else:
            out.append((w, e))
    return tuple(out)


def _mono_divides(a, b) -> bool:
    db = dict(b)
    return all(db.get(v, 0) >= e for v, e in a)


def _mono_div(b, a):
    d = dict(b)
    for v, e in a:
        d[v] -= e
    return tuple(sorted(((v, e) for v, e in d.items() if e), key=lambda ve: _var_key(ve[0])))


# ----------------------------------------------------------------------


@dataclass(frozen=True)
class RingConfig:
    """Ring K{u_1..u_r}{y_1..y_m} with N commuting derivations."""

    n_derivations: int
    variables: tuple[str, ...]
    coefficient_field: Rationals | PrimeField | FunctionField = field(default_factory=Rationals)
    parameters: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "parameters", tuple(self.parameters))
        if not isinstance(self.n_derivations, int) or self.n_derivations < 0:
            raise InvalidRing("number of derivations must be a nonnegative integer")
        names = self.variables + self.parameters
        if isinstance(self.coefficient_field, FunctionField):
            names = names + self.coefficient_field.names
        for name in names:
            if not isinstance(name, str) or not _NAME_RE.match(name) or _DOP_RE.match(name):
                raise InvalidRing(f"invalid variable name {name!r}")
        if len(set(names)) != len(names):
            raise InvalidRing("variable names must be distinct")

    @property
    def m(self) -> int:
        return len(self.variables)

    @property
    def field(self):
        return self.coefficient_field

    @property
    def characteristic(self) -> int:
        return self.coefficient_field.characteristic

    def name_of(self, var_index: int) -> str:
        if var_index > 0:
            return self.variables[var_index - 1]
        return self.parameters[-var_index - 1]

    def index_of(self, name: str) -> int:
        if name in self.variables:
            return self.variables.index(name) + 1
        if name in self.parameters:
            return -(self.parameters.index(name) + 1)
        raise KeyError(name)

    def diffvar(self, name: str, exponents: Iterable[int] | None = None) -> DiffVariable:
        e = tuple(exponents) if exponents is not None else (0,) * self.n_derivations
        if len(e) != self.n_derivations or any(x < 0 for x in e):
            raise DerivationIndexOutOfRange(f"bad exponent vector {e} for N={self.n_derivations}")
        return DiffVariable(self.index_of(name), e)

    def var(self, name: str, exponents: Iterable[int] | None = None) -> DiffPolynomial:
        return self.from_variable(self.diffvar(name, exponents))

    def from_variable(self, v: DiffVariable) -> DiffPolynomial:
        return DiffPolynomial(self, {((v, 1),): self.coefficient_field.one})

    def const(self, c) -> DiffPolynomial:
        c = self.coefficient_field.convert(c)
        return DiffPolynomial(self, {(): c} if c else {})

    @property
    def zero(self) -> DiffPolynomial:
        return DiffPolynomial(self, {})

    @property
    def one(self) -> DiffPolynomial:
        return self.const(1)

    def gens(self) -> list[DiffPolynomial]:
        return [self.var(n) for n in self.variables]

    def with_field(self, coefficient_field, parameters=None) -> RingConfig:
        return RingConfig(
            self.n_derivations,
            self.variables,
            coefficient_field,
            self.parameters if parameters is None else tuple(parameters),
        )

    def format_variable(self, v: DiffVariable) -> str:
        name = self.name_of(v.var_index)
        if self.n_derivations == 1:
            return name + "'" * v.exponents[0]
        s = name
        for i in range(self.n_derivations, 0, -1):
            e = v.exponents[i - 1]
            if e == 1:
                s = f"d{i}({s})"
            elif e > 1:
                s = f"d{i}^{e}({s})"
        return s

    def __str__(self):
        s = f"N={self.n_derivations},vars={','.join(self.variables)}"
        if self.parameters:
            s += f",params={','.join(self.parameters)}"
        return s + f",field={self.coefficient_field}"


class DiffPolynomial:
    """Element of a differential polynomial ring.

    ``terms`` maps monomials -- tuples of ``(DiffVariable, exponent)`` pairs
    sorted by variable -- to nonzero coefficients.
    """

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: RingConfig, terms: dict | None = None):
        self.ring = ring
        self._terms = terms if terms is not None else {}
        self._hash = None

    @classmethod
    def from_terms(cls, ring: RingConfig, items) -> DiffPolynomial:
        """Build from arbitrary (monomial-ish, coefficient) pairs, normalizing."""
        fld = ring.coefficient_field
        acc: dict = {}
        for mono, c in items:
            c = fld.convert(c)
            if isinstance(mono, dict):
                mono = mono.items()
            merged: dict = {}
            for v, e in mono:
                if e:
                    merged[v] = merged.get(v, 0) + e
            key = tuple(sorted(merged.items(), key=lambda ve: _var_key(ve[0])))
            acc[key] = acc.get(key, fld.zero) + c
        return cls(ring, {k: v for k, v in acc.items() if v})

    # -- basic protocol ------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, DiffPolynomial):
            return self.ring == other.ring and self._terms == other._terms
        try:
            o = self.ring.const(other)
        except Exception:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def _coerce(self, other) -> DiffPolynomial | None:
        if isinstance(other, DiffPolynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction, GF, RationalFunction)):
            return self.ring.const(other)
        return None

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if len(o._terms) > len(self._terms):
            big, small = o._terms, self._terms
        else:
            big, small = self._terms, o._terms
        out = dict(big)
        for k, c in small.items():
            s = out.get(k)
            if s is None:
                out[k] = c
            else:
                s = s + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return DiffPolynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return DiffPolynomial(self.ring, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for k, c in o._terms.items():
            s = out.get(k)
            if s is None:
                out[k] = -c
            else:
                s = s - c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return DiffPolynomial(self.ring, out)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GF, RationalFunction)):
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in o._terms.items():
                m = _mono_mul(m1, m2)
                c = c1 * c2
                s = out.get(m)
                out[m] = c if s is None else s + c
        return DiffPolynomial(self.ring, {k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c) -> DiffPolynomial:
        c = self.ring.coefficient_field.convert(c)
        if not c:
            return self.ring.zero
        return DiffPolynomial(self.ring, {k: v * c for k, v in self._terms.items()})

    def mul_monomial(self, mono, c) -> DiffPolynomial:
        return DiffPolynomial(
            self.ring, {_mono_mul(k, mono): v * c for k, v in self._terms.items()}
        )

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        """Division by a nonzero coefficient-field element only."""
        if isinstance(other, DiffPolynomial):
            if not other.is_number():
                return NotImplemented
            other = other.constant_coefficient()
        inv = 1 / self.ring.coefficient_field.convert(other)
        return self.scale(inv)

    # -- differentiation -----------------------------------------------
    def derive(self, i: int) -> DiffPolynomial:
        """Apply the i-th derivation (1-based) using linearity and Leibniz."""
        N = self.ring.n_derivations
        if not 1 <= i <= N:
            raise DerivationIndexOutOfRange(f"derivation d{i} not in 1..{N}")
        fld = self.ring.coefficient_field
        out: dict = {}

        def put(m, c):
            s = out.get(m)
            out[m] = c if s is None else s + c

        for mono, c in self._terms.items():
            dc = fld.derive(c, i)
            if dc:
                put(mono, dc)
            for v, e in mono:
                rest = _mono_remove(mono, v)
                m = _mono_mul(rest, ((v.derive(i), 1),))
                put(m, c * e)
        return DiffPolynomial(self.ring, {k: c for k, c in out.items() if c})

    def apply_theta(self, theta: Iterable[int]) -> DiffPolynomial:
        p = self
        for i, e in enumerate(theta, start=1):
            for _ in range(e):
                p = p.derive(i)
        return p

    # -- structure -----------------------------------------------------
    def variables(self) -> set[DiffVariable]:
        return {v for mono in self._terms for v, _ in mono}

    def unknowns(self) -> set[DiffVariable]:
        return {v for v in self.variables() if v.var_index > 0}

    def is_constant(self) -> bool:
        """True when no unknown occurs (the polynomial lies in R)."""
        return not any(mono and mono[-1][0].var_index > 0 for mono in self._terms)

    def is_number(self) -> bool:
        return all(not mono for mono in self._terms)

    def constant_coefficient(self):
        return self._terms.get((), self.ring.coefficient_field.zero)

    def leader(self) -> DiffVariable:
        best = None
        for mono in self._terms:
            if mono and mono[-1][0].var_index > 0:
                v = mono[-1][0]
                if best is None or _var_key(v) > _var_key(best):
                    best = v
        if best is None:
            raise ConstantPolynomial(f"{self} has no leader")
        return best

    def degree(self, v: DiffVariable) -> int:
        d = 0
        for mono in self._terms:
            for w, e in mono:
                if w == v and e > d:
                    d = e
        return d

    def total_degree(self) -> int:
        return max((sum(e for _, e in mono) for mono in self._terms), default=-1)

    def coefficients_in(self, v: DiffVariable) -> dict[int, DiffPolynomial]:
        """Write self = sum_j I_j v^j and return {j: I_j} (nonzero I_j only)."""
        parts: dict[int, dict] = {}
        for mono, c in self._terms.items():
            j = 0
            for w, e in mono:
                if w == v:
                    j = e
                    break
            rest = _mono_remove(mono, v, j) if j else mono
            parts.setdefault(j, {})[rest] = c
        return {j: DiffPolynomial(self.ring, t) for j, t in parts.items()}

    def sorted_terms(self) -> list:
        """Terms in canonical (descending) print order."""
        return sorted(self._terms.items(), key=lambda kv: _print_key(kv[0]), reverse=True)

    def leading_term_lex(self):
        mono = max(self._terms, key=_mono_key)
        return mono, self._terms[mono]

    def exact_divide(self, other: DiffPolynomial) -> DiffPolynomial | None:
        """Return q with self == q*other, or None if other does not divide self."""
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self:
            return self.ring.zero
        lm, lc = other.leading_term_lex()
        if len(other._terms) == 1:
            if all(_mono_divides(lm, m) for m in self._terms):
                inv = 1 / lc
                return DiffPolynomial(
                    self.ring, {_mono_div(m, lm): c * inv for m, c in self._terms.items()}
                )
            return None
        rem = self
        q_terms: dict = {}
        inv = 1 / lc
        while rem:
            m, c = rem.leading_term_lex()
            if not _mono_divides(lm, m):
                return None
            qm = _mono_div(m, lm)
            qc = c * inv
            q_terms[qm] = q_terms.get(qm, 0) + qc
            rem = rem - other.mul_monomial(qm, qc)
        return DiffPolynomial(self.ring, {k: c for k, c in q_terms.items() if c})

    def r_coefficients(self) -> dict:
        """Group by the unknown part of each monomial.

        Returns {unknown monomial: coefficient in R} where the coefficient is
        a polynomial in parameters only.
        """
        parts: dict = {}
        for mono, c in self._terms.items():
            split = 0
            while split < len(mono) and mono[split][0].var_index < 0:
                split += 1
            parts.setdefault(mono[split:], {})[mono[:split]] = c
        return {k: DiffPolynomial(self.ring, t) for k, t in parts.items()}

    def designated_coefficient(self) -> DiffPolynomial:
        """R-coefficient of the canonically highest unknown monomial."""
        if not self:
            raise ValueError("zero polynomial has no designated coefficient")
        groups = self.r_coefficients()
        top = max(groups, key=_print_key)
        return groups[top]

    def map_coefficients(self, fn, ring: RingConfig | None = None) -> DiffPolynomial:
        ring = ring or self.ring
        return DiffPolynomial.from_terms(ring, ((m, fn(c)) for m, c in self._terms.items()))

    def to_ring(self, ring: RingConfig) -> DiffPolynomial:
        """Re-express in a ring sharing the variable names and derivation count."""
        if ring == self.ring:
            return self
        if ring.n_derivations != self.ring.n_derivations:
            raise RingMismatch("different numbers of derivations")
        fld = ring.coefficient_field
        cache: dict = {}

        def conv(v):
            w = cache.get(v)
            if w is None:
                try:
                    w = DiffVariable(ring.index_of(self.ring.name_of(v.var_index)), v.exponents)
                except KeyError:
                    raise RingMismatch(f"{self.ring.name_of(v.var_index)} not in target ring")
                cache[v] = w
            return w

        def conv_c(c):
            if isinstance(c, RationalFunction) and not isinstance(fld, FunctionField):
                if not c.is_constant():
                    raise RingMismatch("coefficient is not a rational number")
                return c.constant_value()
            return c

        return DiffPolynomial.from_terms(
            ring, ((tuple((conv(v), e) for v, e in m), conv_c(c)) for m, c in self._terms.items())
        )

    # -- printing ------------------------------------------------------
    def _format_monomial(self, mono) -> str:
        ring = self.ring
        params = [(v, e) for v, e in mono if v.var_index < 0]
        unknowns = [(v, e) for v, e in mono if v.var_index > 0]
        out = []
        for v, e in list(reversed(params)) + list(reversed(unknowns)):
            s = ring.format_variable(v)
            out.append(s if e == 1 else f"{s}^{e}")
        return "*".join(out)

    def __str__(self):
        if not self._terms:
            return "0"
        fld = self.ring.coefficient_field
        pieces = []
        for mono, c in self.sorted_terms():
            ms = self._format_monomial(mono)
            if fld.is_number(c):
                val = fld.number_value(c)
                neg = isinstance(val, Fraction) and val < 0
                mag = -val if neg else val
                if not ms:
                    body = str(mag)
                elif mag == 1:
                    body = ms
                else:
                    body = f"{mag}*{ms}"
            else:
                neg = c.is_negative()
                cs = str(-c if neg else c)
                if ms:
                    body = f"({cs})*{ms}"
                else:
                    body = f"({cs})" if " " in cs else cs
            if not pieces:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append((" - " if neg else " + ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"DiffPolynomial({self})"


# ----------------------------------------------------------------------
# module-level operations


def arith(p: DiffPolynomial, q: DiffPolynomial, kind: str) -> DiffPolynomial:
    if p.ring != q.ring:
        raise RingMismatch(f"{p.ring} vs {q.ring}")
    if kind == "add":
        return p + q
    if kind == "sub":
        return p - q
    if kind == "mul":
        return p * q
    raise ValueError(f"unknown operation {kind!r}")


def derive(p: DiffPolynomial, i: int) -> DiffPolynomial:
    return p.derive(i)


def leader(f: DiffPolynomial) -> DiffVariable:
    return f.leader()


class Decomposition(NamedTuple):
    initial: DiffPolynomial
    separant: DiffPolynomial
    degree: int


def initial_separant(f: DiffPolynomial) -> Decomposition:
    u = f.leader()
    parts = f.coefficients_in(u)
    d = max(parts)
    sep = f.ring.zero
    uvar = f.ring.from_variable(u)
    for j, c in parts.items():
        if j:
            sep = sep + (c * (uvar ** (j - 1))).scale(j)
    return Decomposition(parts[d], sep, d)


def h_product(A: Iterable[DiffPolynomial]) -> DiffPolynomial:
    A = list(A)
    if not A:
        raise ValueError("empty set")
    h = A[0].ring.one
    for f in A:
        I, S, _ = initial_separant(f)
        h = h * S * I
    return h
