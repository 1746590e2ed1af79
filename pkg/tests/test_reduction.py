import random

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from rittkit.core import RingConfig, initial_separant
from rittkit.errors import InvalidAutoreducedSet, UnsupportedCharacteristic
from rittkit.fields import PrimeField
from rittkit.reduction import (
    AutoreducedSet,
    CertifiedMember,
    ReducedNonzero,
    UnitIdeal,
    characteristic_set,
    coherence_check,
    full_reduce,
    is_autoreduced,
    is_reduced,
    membership,
    ritt_compare,
)

from randpoly import random_autoreduced, random_nonconstant, random_poly

Q1 = RingConfig(1, ("y",))


def S(P, *srcs, ring="N=1,vars=y"):
    return AutoreducedSet([P(s, ring) for s in srcs])


def test_reduce_second_derivative_against_square(P):
    A = S(P, "(y')^2 - 4*y")
    cert = full_reduce(P("y''"), A)
    assert cert.remainder == P("4*y'")
    assert cert.multiplier == P("2*y'") and cert.m == 1
    assert cert.multiplier * P("y''") == P("(y')^2 - 4*y").derive(1) + P("4*y'")
    assert cert.verify(P("y''"), A)


def test_reduce_derivative_of_member(P):
    A = S(P, "d1(y)*d2(y) - y", ring="N=2,vars=y")
    g = A.members[0].derive(1)
    assert full_reduce(g, A).remainder.is_zero()


def test_reduce_already_reduced(P):
    cert = full_reduce(P("y"), S(P, "y' - y"))
    assert cert.remainder == P("y") and cert.m == 0 and cert.quotients == {}


def test_certificate_json_is_stable(P):
    A = S(P, "(y')^2 - 4*y")
    a = full_reduce(P("y'''*y + y''"), A).dumps()
    b = full_reduce(P("y'''*y + y''"), A).dumps()
    assert a == b
    data = full_reduce(P("y''"), A).to_json()
    assert data == {
        "m": 1,
        "multiplier": "2*y'",
        "quotients": [{"member_index": 0, "theta": [1], "q": "1"}],
        "remainder": "4*y'",
    }


def test_is_autoreduced_examples(P):
    assert is_autoreduced([P("(y')^2 - 4*y")])
    report = is_autoreduced([P("y'"), P("y''")])
    assert not report and "member 1" in report.violations[0]
    assert not is_autoreduced([P("y' - y"), P("y'' - y")])
    assert not is_autoreduced([P("3")])
    with pytest.raises(InvalidAutoreducedSet):
        AutoreducedSet([P("y'"), P("y''")])


def test_characteristic_set_examples(P):
    A = characteristic_set([P("y' - y"), P("y'' - y")])
    assert isinstance(A, AutoreducedSet) and list(A.members) == [P("y' - y")]
    A = characteristic_set([P("(y')^2 - 4*y")])
    assert list(A.members) == [P("(y')^2 - 4*y")]
    assert isinstance(characteristic_set([P("y"), P("1")]), UnitIdeal)


def test_characteristic_set_detects_inconsistency(P):
    # y' = 1 and y'' = y force y = 0, then y' = 0
    assert isinstance(characteristic_set([P("y' - 1"), P("y'' - y")]), UnitIdeal)


def test_membership_examples(P):
    A = S(P, "(y')^2 - 4*y")
    assert isinstance(membership(A.members[0].derive(1).derive(1), A), CertifiedMember)
    res = membership(P("2*y'*y'' - 4*y'"), A)
    assert isinstance(res, CertifiedMember) and res.certificate.m == 0
    res = membership(P("y"), S(P, "y' - y"))
    assert isinstance(res, ReducedNonzero) and res.remainder == P("y")
    assert str(res) == "ReducedNonzero: y"


def test_coherence_examples(P):
    rep = coherence_check(S(P, "(y')^2 - 4*y", "z' - y", ring="N=1,vars=y,z"))
    assert rep and rep.pairs == []
    rep = coherence_check(S(P, "d1(y)", "d2(y)", ring="N=2,vars=y"))
    assert rep and len(rep.pairs) == 1
    assert rep.pairs[0].delta.is_zero()
    rep = coherence_check(S(P, "d1(y) - y", "d2(y) - y", ring="N=2,vars=y"))
    (pair,) = rep.pairs
    # members sort as d2(y) - y < d1(y) - y in the orderly ranking
    assert rep and pair.delta == P("d2(y) - d1(y)", "N=2,vars=y") and pair.remainder.is_zero()


def test_incoherent_set_is_reported(P):
    ring = "N=2,vars=y"
    rep = coherence_check(S(P, "d1(y) - y", "d2(y) - 1", ring=ring))
    assert not rep
    (pair,) = rep.failing
    assert pair.delta == P("d2(y)", ring) and pair.remainder == P("1", ring)


def test_char_p_is_rejected():
    ring = RingConfig(1, ("y",), PrimeField(3))
    y = ring.var("y")
    A = AutoreducedSet([y.derive(1) - y])
    with pytest.raises(UnsupportedCharacteristic):
        full_reduce(y, A)
    with pytest.raises(UnsupportedCharacteristic):
        characteristic_set([y])


def test_ritt_order(P):
    ring = "N=1,vars=y,z"
    low = S(P, "y", ring=ring).ritt_key()
    high = S(P, "y'", ring=ring).ritt_key()
    square = S(P, "y^2", ring=ring).ritt_key()
    longer = S(P, "y", "z'", ring=ring).ritt_key()
    assert ritt_compare(low, high) == -1 and ritt_compare(high, low) == 1
    assert ritt_compare(low, square) == -1
    # a proper extension is lower
    assert ritt_compare(longer, low) == -1
    assert ritt_compare(low, low) == 0


# -- properties -------------------------------------------------------

RINGS = [RingConfig(1, ("y",)), RingConfig(1, ("y", "z")), RingConfig(2, ("y",)), RingConfig(2, ("y", "z"))]


def _instance(seed):
    rng = random.Random(seed)
    ring = rng.choice(RINGS)
    A = []
    while not A:
        A = random_autoreduced(rng, ring, size=rng.randint(1, 2), max_order=2, max_degree=3, max_terms=3)
    g = random_poly(rng, ring, max_order=3, max_degree=3, max_terms=4)
    return AutoreducedSet(A), g


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_certificate_soundness_and_reducedness(seed):
    A, g = _instance(seed)
    cert = full_reduce(g, A)
    assert cert.multiplier * g == cert.combination(A) + cert.remainder
    assert is_reduced(cert.remainder, A)
    h = A.h
    # every multiplier factor is an initial or a separant of A
    for tag, idx in cert.factors:
        assert tag in ("I", "S") and 0 <= idx < len(A)
    assert h  # nonzero


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32))
def test_reduction_is_idempotent(seed):
    A, g = _instance(seed)
    r = full_reduce(g, A).remainder
    again = full_reduce(r, A)
    assert again.remainder == r and again.m == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 2**32))
def test_membership_closed_under_derivation(seed, seed2):
    # a zero remainder certifies saturation membership only for coherent A
    A, _ = _instance(seed)
    assume(coherence_check(A))
    rng = random.Random(seed2)
    ring = A.ring
    g = ring.zero
    for f in A.members:
        theta = tuple(rng.randint(0, 1) for _ in range(ring.n_derivations))
        g = g + random_poly(rng, ring, max_order=1, max_degree=1, max_terms=2) * f.apply_theta(theta)
    assert isinstance(membership(g, A), CertifiedMember)
    for i in range(1, ring.n_derivations + 1):
        assert isinstance(membership(g.derive(i), A), CertifiedMember)


def charset_instance(rng):
    """Random generating set of a size the iteration handles quickly."""
    N = rng.choice([1, 2])
    m = rng.choice([1, 2])
    ring = RingConfig(N, ("y", "z")[:m])
    order = 2 if (N, m) == (1, 1) else 1
    F = [random_nonconstant(rng, ring, max_order=order, max_degree=2, max_terms=3) for _ in range(rng.randint(2, 3))]
    return F


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_characteristic_set_properties(seed):
    F = charset_instance(random.Random(seed))
    C = characteristic_set(F)
    if isinstance(C, UnitIdeal):
        assert C.witness and C.witness.is_constant()
        return
    assert is_autoreduced(C.members)
    for f in F:
        assert isinstance(membership(f, C), CertifiedMember)


# -- N = 0: classical pseudo-division ----------------------------------

Z = sympy.symbols("z x")


def _to_sympy(p):
    return sympy.sympify(str(p).replace("^", "**"), locals=dict(zip(("z", "x"), Z)))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32))
def test_matches_pseudo_division(seed):
    rng = random.Random(seed)
    ring = RingConfig(0, ("z", "x"))
    x = ring.diffvar("x")
    while True:
        f = random_poly(rng, ring, max_degree=6, max_terms=4, constant_prob=0.0)
        if not f.is_constant() and f.leader() == x:
            break
    g = random_poly(rng, ring, max_degree=6, max_terms=5)
    cert = full_reduce(g, AutoreducedSet([f]))
    I = initial_separant(f).initial
    prem = sympy.prem(_to_sympy(g), _to_sympy(f), Z[1])
    delta = max(g.degree(x) - f.degree(x) + 1, 0)
    lhs = sympy.expand(_to_sympy(I**cert.m) * prem)
    rhs = sympy.expand(_to_sympy(I**delta * cert.remainder))
    assert lhs == rhs
