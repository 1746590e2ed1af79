"""Ritt reduction, autoreduced sets, coherence and characteristic sets.

Every reduction returns a :class:`ReductionCertificate` recording an exact
identity ``M * g = sum_{f, theta} q_{f,theta} * theta(f) + r`` where ``M`` is
a product of separants and initials of members of the autoreduced set.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from sympy.polys.domains import QQ
from sympy.polys.euclidtools import dup_gcd

from .core import (
    DiffPolynomial,
    DiffVariable,
    _var_key,
    initial_separant,
    rank_of,
)
from .errors import InvalidAutoreducedSet, RingMismatch, UnsupportedCharacteristic
from .fields import Rationals

# Re-expand every certificate as it is produced (set by the test suite).
CHECK_CERTIFICATES = os.environ.get("RITTKIT_CHECK_CERTIFICATES") == "1"


def _require_char0(ring):
    if ring.characteristic != 0:
        raise UnsupportedCharacteristic(
            f"reduction needs characteristic 0, got {ring.coefficient_field}"
        )


def is_reduced_wrt(g: DiffPolynomial, u: DiffVariable, d: int) -> bool:
    """No proper derivative of u occurs in g, and deg_u g < d."""
    for v in g.unknowns():
        if v.is_proper_derivative_of(u):
            return False
    return g.degree(u) < d


def polynomial_rank(f: DiffPolynomial):
    """Ritt rank of a polynomial: (leader rank, leader degree); None if constant."""
    if f.is_constant():
        return None
    u = f.leader()
    return (rank_of(u), f.degree(u))


@dataclass
class AutoreductionReport:
    ok: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def is_autoreduced(A: Sequence[DiffPolynomial]) -> AutoreductionReport:
    A = list(A)
    violations = []
    info = []
    for i, f in enumerate(A):
        if f.is_constant():
            violations.append(f"member {i} ({f}) has no leader")
            info.append(None)
        else:
            u = f.leader()
            info.append((u, f.degree(u)))
    for i, a in enumerate(info):
        for j, b in enumerate(info):
            if i == j or a is None or b is None:
                continue
            if i < j and a[0] == b[0]:
                violations.append(f"members {i} and {j} share the leader {A[i].ring.format_variable(a[0])}")
                continue
            if a[0] != b[0] and not is_reduced_wrt(A[i], b[0], b[1]):
                violations.append(f"member {i} ({A[i]}) is not reduced with respect to member {j} ({A[j]})")
    return AutoreductionReport(not violations, violations)


class AutoreducedSet:
    """Autoreduced set sorted by ascending leader rank, with cached data."""

    def __init__(self, members: Iterable[DiffPolynomial], ring=None):
        members = list(members)
        if not members and ring is None:
            raise InvalidAutoreducedSet("an empty set needs an explicit ring")
        self.ring = ring if ring is not None else members[0].ring
        for f in members:
            if f.ring != self.ring:
                raise RingMismatch("members live in different rings")
        report = is_autoreduced(members)
        if not report:
            raise InvalidAutoreducedSet("; ".join(report.violations))
        members.sort(key=lambda f: _var_key(f.leader()))
        self.members = tuple(members)
        self.leaders = tuple(f.leader() for f in members)
        decs = [initial_separant(f) for f in members]
        self.initials = tuple(d.initial for d in decs)
        self.separants = tuple(d.separant for d in decs)
        self.degrees = tuple(d.degree for d in decs)
        h = self.ring.one
        for d in decs:
            h = h * d.separant * d.initial
        self.h = h

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def __eq__(self, other):
        if isinstance(other, AutoreducedSet):
            return self.ring == other.ring and self.members == other.members
        if isinstance(other, (list, tuple)):
            return list(self.members) == list(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.members)

    def ritt_key(self):
        return [(rank_of(u), d) for u, d in zip(self.leaders, self.degrees)]

    def __str__(self):
        return "{" + ", ".join(str(f) for f in self.members) + "}"

    def __repr__(self):
        return f"AutoreducedSet({self})"


def ritt_compare(a: Sequence, b: Sequence) -> int:
    """Compare autoreduced sets (given as ritt_key lists): -1, 0 or 1.

    Elementwise by (leader rank, degree); if one list is a prefix of the
    other, the longer one is lower.
    """
    for x, y in zip(a, b):
        if x != y:
            return -1 if x < y else 1
    if len(a) == len(b):
        return 0
    return 1 if len(a) < len(b) else -1


# ----------------------------------------------------------------------
# certificates


@dataclass
class ReductionCertificate:
    multiplier: DiffPolynomial
    factors: list[tuple[str, int]]
    quotients: dict[tuple[int, tuple[int, ...]], DiffPolynomial]
    remainder: DiffPolynomial

    @property
    def h_exponent(self) -> int:
        return len(self.factors)

    m = h_exponent

    def combination(self, A: AutoreducedSet) -> DiffPolynomial:
        total = A.ring.zero
        for (idx, theta), q in self.quotients.items():
            total = total + q * A.members[idx].apply_theta(theta)
        return total

    def verify(self, g: DiffPolynomial, A: AutoreducedSet) -> bool:
        """Re-expand the identity and check the remainder is reduced."""
        if self.multiplier * g != self.combination(A) + self.remainder:
            return False
        return all(
            is_reduced_wrt(self.remainder, u, d) for u, d in zip(A.leaders, A.degrees)
        )

    def to_json(self) -> dict:
        return {
            "m": self.h_exponent,
            "multiplier": str(self.multiplier),
            "quotients": [
                {"member_index": idx, "theta": list(theta), "q": str(q)}
                for (idx, theta), q in sorted(self.quotients.items())
            ],
            "remainder": str(self.remainder),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def is_reduced(g: DiffPolynomial, A: AutoreducedSet) -> bool:
    return all(is_reduced_wrt(g, u, d) for u, d in zip(A.leaders, A.degrees))


def _find_step(rem: DiffPolynomial, A: AutoreducedSet):
    order = sorted(range(len(A)), key=lambda i: _var_key(A.leaders[i]), reverse=True)
    for v in sorted(rem.unknowns(), key=_var_key, reverse=True):
        for i in order:
            if v.is_proper_derivative_of(A.leaders[i]):
                return v, i, v.theta_over(A.leaders[i])
        for i in order:
            if v == A.leaders[i] and rem.degree(v) >= A.degrees[i]:
                return v, i, None
    return None


def full_reduce(g: DiffPolynomial, A: AutoreducedSet) -> ReductionCertificate:
    """Ritt's full reduction of g with respect to A.

    The highest-ranked offending derivative is eliminated first; proper
    derivatives of leaders are removed with the separant, leader powers with
    the initial.  A multiplier is applied only when the leading coefficient
    is not already divisible by it.
    """
    _require_char0(g.ring)
    if A.members and g.ring != A.ring:
        raise RingMismatch("polynomial and set live in different rings")
    ring = g.ring
    rem = g
    multiplier = ring.one
    factors: list[tuple[str, int]] = []
    quotients: dict = {}
    derived: dict = {}
    while True:
        step = _find_step(rem, A)
        if step is None:
            break
        v, idx, theta = step
        f = A.members[idx]
        if theta is None:
            tf, key, k, s, tag = f, (idx, (0,) * ring.n_derivations), A.degrees[idx], A.initials[idx], "I"
        else:
            key = (idx, theta)
            tf = derived.get(key)
            if tf is None:
                tf = derived[key] = f.apply_theta(theta)
            k, tag = 1, "S"
            s = tf.coefficients_in(v)[1]
        vpoly = ring.from_variable(v)
        while rem:
            parts = rem.coefficients_in(v)
            e = max(parts)
            if e < k:
                break
            c = parts[e]
            shift = vpoly ** (e - k)
            q = c.exact_divide(s)
            if q is None:
                rem = rem * s
                multiplier = multiplier * s
                factors.append((tag, idx))
                quotients = {kk: qq * s for kk, qq in quotients.items()}
                q = c
            q = q * shift
            rem = rem - q * tf
            quotients[key] = quotients.get(key, ring.zero) + q
            if not quotients[key]:
                del quotients[key]
    cert = ReductionCertificate(multiplier, factors, quotients, rem)
    if CHECK_CERTIFICATES and not cert.verify(g, A):
        raise AssertionError(f"certificate identity failed for {g} against {A}")
    return cert


def reduce_remainder(g: DiffPolynomial, A: AutoreducedSet) -> DiffPolynomial:
    """Remainder of g modulo A up to a unit, with no certificate.

    Same step order as :func:`full_reduce`, but the partial remainder is
    rescaled to its primitive part after every step to keep rational
    coefficients small.
    """
    _require_char0(g.ring)
    ring = g.ring
    rem = primitive_part(g)
    derived: dict = {}
    while rem:
        step = _find_step(rem, A)
        if step is None:
            break
        v, idx, theta = step
        f = A.members[idx]
        if theta is None:
            tf, k, s = f, A.degrees[idx], A.initials[idx]
        else:
            tf = derived[(idx, theta)] = derived.get((idx, theta)) or f.apply_theta(theta)
            k, s = 1, tf.coefficients_in(v)[1]
        vpoly = ring.from_variable(v)
        while rem:
            parts = rem.coefficients_in(v)
            e = max(parts)
            if e < k:
                break
            c = parts[e]
            q = c.exact_divide(s)
            if q is None:
                rem, q = rem * s, c
            rem = primitive_part(rem - q * vpoly ** (e - k) * tf)
    return rem


# ----------------------------------------------------------------------
# membership


@dataclass
class CertifiedMember:
    certificate: ReductionCertificate

    def __str__(self):
        return "CertifiedMember"


@dataclass
class ReducedNonzero:
    """Nonzero remainder; proves non-membership only if A characterizes a prime."""

    remainder: DiffPolynomial
    certificate: ReductionCertificate

    def __str__(self):
        return f"ReducedNonzero: {self.remainder}"


def membership(g: DiffPolynomial, A: AutoreducedSet) -> CertifiedMember | ReducedNonzero:
    cert = full_reduce(g, A)
    if cert.remainder:
        return ReducedNonzero(cert.remainder, cert)
    return CertifiedMember(cert)


# ----------------------------------------------------------------------
# coherence


@dataclass
class DeltaPair:
    i: int
    j: int
    common_derivative: DiffVariable
    delta: DiffPolynomial
    remainder: DiffPolynomial


@dataclass
class CoherenceReport:
    ok: bool
    pairs: list[DeltaPair] = field(default_factory=list)

    def __bool__(self):
        return self.ok

    @property
    def failing(self) -> list[DeltaPair]:
        return [p for p in self.pairs if p.remainder]


def coherence_check(A: AutoreducedSet) -> CoherenceReport:
    """Rosenfeld coherence: every Delta-polynomial reduces to zero."""
    _require_char0(A.ring)
    pairs = []
    for i in range(len(A)):
        for j in range(i + 1, len(A)):
            ui, uj = A.leaders[i], A.leaders[j]
            if ui.var_index != uj.var_index:
                continue
            lcd = DiffVariable(
                ui.var_index, tuple(max(a, b) for a, b in zip(ui.exponents, uj.exponents))
            )
            if lcd == ui or lcd == uj:
                continue
            tf = A.members[i].apply_theta(lcd.theta_over(ui))
            tg = A.members[j].apply_theta(lcd.theta_over(uj))
            delta = A.separants[j] * tf - A.separants[i] * tg
            rem = full_reduce(delta, A).remainder
            pairs.append(DeltaPair(i, j, lcd, delta, rem))
    return CoherenceReport(all(not p.remainder for p in pairs), pairs)


# ----------------------------------------------------------------------
# characteristic sets


@dataclass
class UnitIdeal:
    """The generated ideal meets R\\{0}: a remainder free of unknowns appeared."""

    witness: DiffPolynomial

    def __str__(self):
        return f"UnitIdeal (witness {self.witness})"


def _sort_key(f: DiffPolynomial):
    u = f.leader()
    return (_var_key(u), f.degree(u), str(f))


def _adjoin_key(f: DiffPolynomial):
    u = f.leader()
    return (_var_key(u), f.degree(u), _height(f), len(f.terms), str(f))


def _height(f: DiffPolynomial) -> int:
    """Bit size of the largest rational coefficient (0 over other fields)."""
    h = 0
    for _, c in f.items():
        if isinstance(c, Fraction):
            h = max(h, abs(c.numerator).bit_length() + c.denominator.bit_length())
    return h


def basic_set(polys: Iterable[DiffPolynomial]) -> list[DiffPolynomial]:
    """Lowest autoreduced subset (greedy selection in Ritt order)."""
    chosen: list[DiffPolynomial] = []
    info = []
    for p in sorted((p for p in polys if not p.is_constant()), key=_sort_key):
        if all(is_reduced_wrt(p, u, d) for u, d in info):
            u = p.leader()
            if any(u == w for w, _ in info):
                continue
            chosen.append(p)
            info.append((u, p.degree(u)))
    return chosen


def primitive_part(f: DiffPolynomial) -> DiffPolynomial:
    """Scale f by a unit of the coefficient field to a small normal form.

    Over Q the result has coprime integer coefficients and a positive
    canonically-leading coefficient; over Q(t) it is monic.
    """
    if not f:
        return f
    lead = f.sorted_terms()[0][1]
    if isinstance(lead, Fraction):
        den = math.lcm(*(c.denominator for _, c in f.items()))
        g = math.gcd(*(c.numerator * (den // c.denominator) for _, c in f.items()))
        scale = Fraction(den, g)
        return f.scale(scale if lead > 0 else -scale)
    return f.scale(1 / lead)


def _univariate_gcd(f: DiffPolynomial, g: DiffPolynomial) -> DiffPolynomial | None:
    """gcd over Q when f and g are polynomials in one and the same variable."""
    vs = f.variables()
    if len(vs) != 1 or g.variables() != vs or not isinstance(f.ring.coefficient_field, Rationals):
        return None
    (v,) = vs
    def dense(p):
        parts = p.coefficients_in(v)
        return [QQ.convert(parts[j].constant_coefficient()) if j in parts else QQ.zero
                for j in range(max(parts), -1, -1)]
    coeffs = dup_gcd(dense(f), dense(g), QQ)
    n = len(coeffs) - 1
    ring = f.ring
    return DiffPolynomial.from_terms(
        ring, [(((v, n - i),), Fraction(int(c.numerator), int(c.denominator))) for i, c in enumerate(coeffs)]
    )


def characteristic_set(F: Iterable[DiffPolynomial]) -> AutoreducedSet | UnitIdeal:
    F = list(F)
    if not F:
        raise ValueError("characteristic_set needs at least one polynomial")
    ring = F[0].ring
    _require_char0(ring)
    basis: list[DiffPolynomial] = []
    for f in F:
        if f.ring != ring:
            raise RingMismatch("inputs live in different rings")
        if f and f not in basis:
            basis.append(f)
    for f in basis:
        if f.is_constant():
            return UnitIdeal(f)
    if not basis:
        return AutoreducedSet([], ring)
    while True:
        A = AutoreducedSet(basic_set(basis))
        chosen = set(A.members)
        lowest = None
        for p in basis:
            if p in chosen:
                continue
            r = reduce_remainder(p, A)
            if r:
                if r.is_constant():
                    return UnitIdeal(r)
                if lowest is None or _adjoin_key(r) < _adjoin_key(lowest):
                    lowest = r
        if lowest is None:
            return A
        # in one variable over Q the gcd lies in the ideal: skip Euclid's rounds
        low = A.members[0]
        if lowest.leader() == low.leader():
            g = _univariate_gcd(lowest, low)
            if g is not None:
                if g.is_constant():
                    return UnitIdeal(g)
                lowest = primitive_part(g)
        # one remainder reduced w.r.t. A already lowers the basic set;
        # the smallest coefficients keep pseudo-remainder sequences tame
        basis.append(lowest)
