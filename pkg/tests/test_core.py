import random
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rittkit.core import (
    DiffPolynomial,
    DiffVariable,
    RingConfig,
    arith,
    derive,
    h_product,
    initial_separant,
    leader,
    rank_of,
)
from rittkit.errors import ConstantPolynomial, DerivationIndexOutOfRange, InvalidRing
from rittkit.fields import PrimeField
from rittkit.parser import parse_ring

from randpoly import random_nonconstant, random_poly, random_variable

Q1 = RingConfig(1, ("y",))
Q2 = RingConfig(2, ("y1", "y2"))


def test_arith_examples(P):
    assert arith(P("y + 1"), P("-y"), "add") == Q1.one
    assert arith(P("y'"), P("y'"), "mul") == P("(y')^2")
    ring = parse_ring("N=1,vars=y,field=GF(3)")
    assert arith(P("y+1", ring), P("(y+1)^2", ring), "mul") == P("y^3 + 1", ring)


def test_arith_rejects_mismatched_rings(P):
    with pytest.raises(Exception):
        arith(P("y"), P("y1", "N=2,vars=y1,y2"), "add")


def test_derive_examples(P):
    assert derive(P("y"), 1) == P("y'")
    assert derive(P("y^2"), 1) == P("2*y*y'")
    ring = parse_ring("N=1,vars=y,field=GF(5)")
    assert derive(P("y^5", ring), 1).is_zero()


def test_derive_index_out_of_range(P):
    with pytest.raises(DerivationIndexOutOfRange):
        derive(P("y"), 2)
    with pytest.raises(DerivationIndexOutOfRange):
        derive(P("y", "N=0,vars=y"), 1)


def test_rank_examples():
    v = Q2.diffvar("y1", (1, 2))
    assert rank_of(v).flat() == (3, 1, 1, 2)
    assert rank_of(Q2.diffvar("y1", (1, 0))) > rank_of(Q2.diffvar("y2"))
    assert rank_of(Q2.diffvar("y2", (0, 1))) > rank_of(Q2.diffvar("y1", (1, 0)))


def test_leader_examples(P):
    assert leader(P("(y')^2 - 4*y")) == Q1.diffvar("y", (1,))
    f = P("d1(y1)*d2(y2) + y1", "N=2,vars=y1,y2")
    assert leader(f) == Q2.diffvar("y2", (0, 1))
    with pytest.raises(ConstantPolynomial):
        leader(P("7"))


def test_initial_separant_examples(P):
    d = initial_separant(P("(y')^2 - 4*y"))
    assert (d.initial, d.separant, d.degree) == (Q1.one, P("2*y'"), 2)
    d = initial_separant(P("y*(y'')^3 + y'"))
    assert (d.initial, d.separant, d.degree) == (P("y"), P("3*y*(y'')^2"), 3)
    d = initial_separant(P("y' - y"))
    assert (d.initial, d.separant, d.degree) == (Q1.one, Q1.one, 1)


def test_h_product_examples(P):
    assert h_product([P("(y')^2 - 4*y")]) == P("2*y'")
    assert h_product([P("y' - y")]) == Q1.one
    assert h_product([P("(y')^2 - 4*y"), P("y'' - y")]) == P("2*y'")
    with pytest.raises(ConstantPolynomial):
        h_product([P("y"), P("3")])


def test_ring_validation():
    with pytest.raises(InvalidRing):
        RingConfig(1, ("y", "y"))
    with pytest.raises(InvalidRing):
        RingConfig(1, ("",))
    with pytest.raises(InvalidRing):
        RingConfig(-1, ("y",))
    with pytest.raises(InvalidRing):
        RingConfig(1, ("y",), PrimeField(4))


def test_zero_polynomial_is_empty_map(P):
    z = P("y - y")
    assert z.terms == {} and not z
    assert str(z) == "0"


def test_rationals_in_lowest_terms(P):
    f = P("6/4*y")
    (c,) = f.terms.values()
    assert (c.numerator, c.denominator) == (3, 2)


# -- properties -------------------------------------------------------

rings = st.sampled_from([Q1, Q2, RingConfig(2, ("y",)), RingConfig(3, ("y",))])


@st.composite
def poly_in(draw, ring=None, **kw):
    ring = ring or draw(rings)
    rng = random.Random(draw(st.integers(0, 2**32)))
    return random_poly(rng, ring, **kw)


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_derivations_commute(data):
    ring = data.draw(rings.filter(lambda r: r.n_derivations >= 2))
    p = data.draw(poly_in(ring))
    i, j = data.draw(st.permutations(range(1, ring.n_derivations + 1)))[:2]
    assert p.derive(i).derive(j) == p.derive(j).derive(i)


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_leibniz(data):
    ring = data.draw(rings)
    p, q = data.draw(poly_in(ring)), data.draw(poly_in(ring))
    i = data.draw(st.integers(1, ring.n_derivations))
    assert (p * q).derive(i) == p.derive(i) * q + p * q.derive(i)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32), rings)
def test_rank_order_is_total_and_strict(seed, ring):
    rng = random.Random(seed)
    a, b, c = (random_variable(rng, ring, 3) for _ in range(3))
    ra, rb, rc = map(rank_of, (a, b, c))
    assert (ra < rb) + (rb < ra) + (ra == rb) == 1
    assert (ra == rb) == (a == b)
    if ra <= rb <= rc:
        assert ra <= rc
    for i in range(1, ring.n_derivations + 1):
        assert rank_of(a.derive(i)) > ra


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32), rings)
def test_decomposition_reconstructs(seed, ring):
    f = random_nonconstant(random.Random(seed), ring)
    u = f.leader()
    parts = f.coefficients_in(u)
    d = initial_separant(f)
    assert d.degree == max(parts) and d.initial == parts[d.degree]
    u_poly = ring.from_variable(u)
    assert sum((c * u_poly**j for j, c in parts.items()), ring.zero) == f
    sep = sum((c.scale(j) * u_poly ** (j - 1) for j, c in parts.items() if j), ring.zero)
    assert d.separant == sep


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_canonical_form_independent_of_term_order(seed):
    rng = random.Random(seed)
    p = random_poly(rng, Q2, max_terms=5)
    items = list(p.items())
    for perm in list(permutations(items))[:6]:
        q = DiffPolynomial.from_terms(Q2, perm)
        assert q.terms == p.terms and hash(q) == hash(p)
    assert (p - p).terms == {}


@pytest.mark.parametrize("p", [2, 3, 5])
def test_pth_power_has_zero_derivative(p):
    ring = RingConfig(2, ("y", "z"), PrimeField(p))
    rng = random.Random(p)
    for _ in range(25):
        f = random_poly(rng, ring, max_order=1, max_degree=2, max_terms=3)
        for i in (1, 2):
            assert derive(f**p, i).is_zero()


def test_diffvariable_helpers():
    v = DiffVariable(1, (1, 2))
    w = DiffVariable(1, (0, 1))
    assert v.is_proper_derivative_of(w) and not w.is_derivative_of(v)
    assert v.theta_over(w) == (1, 1)
    assert v.order == 3
