"""Witnesses for extending coefficient specializations, and their verifier.

Setting: S = R{t_1..t_n} is generated over R = K{u_1..u_r} and b = B(t) is
a nonzero element of S.  A *witness* is a nonzero a in R such that every
specialization phi of R with phi(a) != 0 should extend to S without
killing b.  The construction follows the generator induction: peel off the
last generator, find a witness in R{t_1..t_{n-1}}, and descend.

For a differentially transcendental generator the witness is a coefficient
of B.  For an algebraic one the witness multiplies the coefficients whose
survival under phi keeps the specialized system in the shape required by
Rosenfeld's criterion (leaders, initials, separants and a nonzero reduced
remainder of B).  This is a surrogate for an elimination step and is
validated by :func:`prime_lift_check`, not proved.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Sequence

from .core import DiffPolynomial, RingConfig, initial_separant
from .errors import ZeroTarget
from .fields import FunctionField
from .funcfield import Specialization, apply_specialization
from .reduction import (
    AutoreducedSet,
    CertifiedMember,
    coherence_check,
    full_reduce,
    is_autoreduced,
    membership,
    _require_char0,
)


# ----------------------------------------------------------------------
# presentations


@dataclass
class Presentation:
    """S = R{t_1..t_n} given by per-level characteristic sets and a target.

    ``relations[i]`` lives in ``level_ring(i + 1)``, whose single unknown is
    the (i+1)-th generator and whose parameters are R's parameters followed
    by the earlier generators.  An empty level means the generator is
    differentially transcendental over the previous ones.
    """

    base_ring: RingConfig
    generators: tuple[str, ...]
    relations: list[list[DiffPolynomial]]
    target: DiffPolynomial

    def __post_init__(self):
        self.generators = tuple(self.generators)
        if len(self.relations) != len(self.generators):
            raise ValueError("one relation list per generator is required")

    @property
    def n(self) -> int:
        return len(self.generators)

    def level_ring(self, i: int) -> RingConfig:
        b = self.base_ring
        return RingConfig(
            b.n_derivations,
            (self.generators[i - 1],),
            b.coefficient_field,
            b.parameters + self.generators[: i - 1],
        )

    def full_ring(self) -> RingConfig:
        b = self.base_ring
        return RingConfig(b.n_derivations, self.generators, b.coefficient_field, b.parameters)

    def level_set(self, i: int) -> AutoreducedSet:
        ring = self.level_ring(i)
        return AutoreducedSet([f.to_ring(ring) for f in self.relations[i - 1]], ring)

    def validate(self) -> list[str]:
        """Return a list of violated invariants (empty when valid)."""
        problems = []
        for i in range(1, self.n + 1):
            members = [f.to_ring(self.level_ring(i)) for f in self.relations[i - 1]]
            report = is_autoreduced(members)
            if not report:
                problems.extend(f"level {i}: {v}" for v in report.violations)
                continue
            if not coherence_check(AutoreducedSet(members, self.level_ring(i))):
                problems.append(f"level {i}: relations are not coherent")
        if not problems:
            B = self.target.to_ring(self.level_ring(self.n))
            if isinstance(membership(B, self.level_set(self.n)), CertifiedMember):
                problems.append("target reduces to 0: b would vanish in S")
        return problems

    @classmethod
    def from_json(cls, data: dict | str) -> Presentation:
        from .parser import parse_expression, parse_ring

        if isinstance(data, str):
            data = json.loads(data)
        spec = data.get("ring", "N=1")
        base = parse_ring(spec + ",vars=" if "vars=" not in spec else spec)
        base = RingConfig(base.n_derivations, (), base.coefficient_field, base.parameters)
        gens = tuple(data["generators"])
        rels_src = data.get("relations") or [[] for _ in gens]
        pres = cls(base, gens, [[] for _ in gens], base.zero)
        pres.relations = [
            [parse_expression(s, pres.level_ring(i + 1)) for s in level]
            for i, level in enumerate(rels_src)
        ]
        pres.target = parse_expression(data["target"], pres.full_ring())
        return pres

    def to_json(self) -> dict:
        b = self.base_ring
        ring = f"N={b.n_derivations}"
        if b.parameters:
            ring += ",params=" + ",".join(b.parameters)
        ring += f",field={b.coefficient_field}"
        return {
            "schema": 1,
            "ring": ring,
            "generators": list(self.generators),
            "relations": [[str(f) for f in level] for level in self.relations],
            "target": str(self.target),
        }


# ----------------------------------------------------------------------
# witnesses


def witness_transcendental(B: DiffPolynomial) -> DiffPolynomial:
    """Coefficient (in R) of B's canonically highest term."""
    if not B:
        raise ZeroTarget("the target polynomial is zero")
    return B.designated_coefficient()


def witness_algebraic(A: AutoreducedSet, B: DiffPolynomial) -> DiffPolynomial:
    _require_char0(B.ring)
    r = full_reduce(B, A).remainder
    if not r:
        raise ZeroTarget(f"{B} reduces to 0 modulo the characteristic set")
    a = B.ring.one
    for I, S in zip(A.initials, A.separants):
        a = a * I.designated_coefficient() * S.designated_coefficient()
    a = a * r.designated_coefficient()
    assert a, "product of nonzero elements of a domain"
    return a


@dataclass
class WitnessStep:
    level: int
    case: str
    target: DiffPolynomial
    witness: DiffPolynomial


def witness_chain(P: Presentation, trace: list | None = None) -> DiffPolynomial:
    """Descend through the generators, returning a witness in R."""
    target = P.target.to_ring(P.level_ring(P.n))
    for i in range(P.n, 0, -1):
        ring = P.level_ring(i)
        target = target.to_ring(ring)
        A = P.level_set(i)
        if len(A) == 0:
            a, case = witness_transcendental(target), "transcendental"
        else:
            a, case = witness_algebraic(A, target), "algebraic"
        if trace is not None:
            trace.append(WitnessStep(i, case, target, a))
        if i > 1:
            lower = P.level_ring(i - 1)
            a_low = a.to_ring(lower)
            A_low = P.level_set(i - 1)
            if len(A_low) and isinstance(membership(a_low, A_low), CertifiedMember):
                raise ZeroTarget(f"intermediate witness {a} vanishes at level {i - 1}")
            target = a_low
        else:
            target = a
    result = target.to_ring(P.base_ring)
    if not result:
        raise ZeroTarget("witness collapsed to zero")
    return result


# ----------------------------------------------------------------------
# verifier


@dataclass(frozen=True)
class ConsistencyVerdict:
    status: str
    reason: str = ""

    @property
    def consistent(self) -> bool:
        return self.status == "Consistent"

    def __str__(self):
        return self.status if not self.reason else f"{self.status}: {self.reason}"


def Consistent() -> ConsistencyVerdict:
    return ConsistencyVerdict("Consistent")


def Inconsistent(reason: str) -> ConsistencyVerdict:
    return ConsistencyVerdict("Inconsistent", reason)


def Unknown(reason: str) -> ConsistencyVerdict:
    return ConsistencyVerdict("Unknown", reason)


def specialize_and_check(A: AutoreducedSet, B: DiffPolynomial, phi) -> ConsistencyVerdict:
    """Is {A^phi = 0, H_A^phi != 0, B^phi != 0} solvable, by Rosenfeld's criterion?"""
    _require_char0(A.ring)
    if not isinstance(phi, Specialization):
        phi = Specialization.from_mapping(phi)
    specialized = [apply_specialization(phi, f) for f in A.members]
    for k, fp in enumerate(specialized):
        if fp and fp.is_constant():
            return Inconsistent(f"member {k} collapses to the nonzero constant {fp}")
    for k, (f, fp) in enumerate(zip(A.members, specialized)):
        if not fp:
            return Unknown(f"member {k} specializes to 0")
        if fp.leader() != A.leaders[k] or fp.degree(fp.leader()) != A.degrees[k]:
            return Unknown(f"member {k} loses its leader or leader degree")
        dec = initial_separant(fp)
        if not dec.separant:
            return Unknown(f"separant of member {k} vanishes")
    report = is_autoreduced(specialized)
    if not report:
        return Unknown("specialized set is not autoreduced: " + "; ".join(report.violations))
    target = phi.target_ring(A.ring)
    As = AutoreducedSet(specialized, target)
    coh = coherence_check(As)
    if not coh:
        return Unknown("specialized set is not coherent")
    Bp = apply_specialization(phi, B)
    if not Bp:
        return Inconsistent("target specializes to 0")
    r = full_reduce(Bp, As).remainder
    if not r:
        return Inconsistent("target reduces to 0 modulo the specialized set")
    return Consistent()


# ----------------------------------------------------------------------
# randomized lifting harness


def _random_poly(rng: random.Random, fld: FunctionField, max_degree: int = 2):
    R = fld.polyring
    k = len(fld.names)
    monos = [()]
    for _ in range(max_degree):
        monos = monos + [m + (i,) for m in monos for i in range(k) if not m or i >= m[-1]]
    monos = sorted(set(monos))
    p = R.zero
    for m in monos:
        c = rng.randint(-3, 3)
        if c:
            term = R(c)
            for i in m:
                term = term * R.gens[i]
            p = p + term
    return p


def random_rational_function(rng: random.Random, fld: FunctionField):
    from .fields import RationalFunction

    num = _random_poly(rng, fld)
    den = _random_poly(rng, fld)
    if not den:
        den = fld.polyring.one
    return RationalFunction(fld, num, den)


def sample_specialization(rng: random.Random, params: Sequence[str], fld: FunctionField) -> Specialization:
    return Specialization({p: random_rational_function(rng, fld) for p in params}, fld)


def _boundary_specializations(params, fld):
    t1 = fld.gen(1)
    for value in (fld.zero, fld.one, t1):
        yield Specialization({p: value for p in params}, fld)


@dataclass
class LiftTrial:
    index: int
    phi: str
    verdict: ConsistencyVerdict


@dataclass
class LiftReport:
    trials: int
    consistent: int = 0
    inconsistent: int = 0
    unknown: int = 0
    rejected: int = 0
    failures: list[LiftTrial] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.consistent == self.trials

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "consistent": self.consistent,
            "inconsistent": self.inconsistent,
            "unknown": self.unknown,
            "rejected": self.rejected,
            "failures": [
                {"index": t.index, "phi": t.phi, "verdict": str(t.verdict)} for t in self.failures
            ],
        }


def prime_lift_check(
    A: AutoreducedSet,
    a: DiffPolynomial,
    trials: int = 100,
    seed: int = 0,
    target: DiffPolynomial | None = None,
    field: FunctionField | None = None,
) -> LiftReport:
    """Sample specializations with phi(a) != 0 and verify each is Consistent.

    The first candidates are the constant maps 0, 1 and t1 on every
    parameter; the rest are random rational functions with numerator and
    denominator of degree <= 2 and coefficients in -3..3.
    """
    ring = A.ring
    _require_char0(ring)
    if field is None:
        field = FunctionField.standard(max(1, ring.n_derivations))
    if target is None:
        target = ring.one
    a = a.to_ring(ring)
    rng = random.Random(seed)
    params = ring.parameters
    boundary = _boundary_specializations(params, field)
    report = LiftReport(trials)
    accepted = 0
    attempts = 0
    while accepted < trials:
        attempts += 1
        if attempts > 100 * max(trials, 1):
            raise RuntimeError("could not sample specializations with phi(a) != 0")
        phi = next(boundary, None) or sample_specialization(rng, params, field)
        if not apply_specialization(phi, a):
            report.rejected += 1
            continue
        verdict = specialize_and_check(A, target, phi)
        if verdict.status == "Consistent":
            report.consistent += 1
        else:
            if verdict.status == "Inconsistent":
                report.inconsistent += 1
            else:
                report.unknown += 1
            report.failures.append(LiftTrial(accepted, str(phi), verdict))
        accepted += 1
    return report
