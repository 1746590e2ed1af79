import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rittkit.errors import DivisionByZero, EmptyInput
from rittkit.fields import FunctionField, RationalFunction
from rittkit.funcfield import (
    Specialization,
    apply_specialization,
    check_derivation_compatible,
    rf,
    rf_arith_and_derive,
    wronskian,
)
from rittkit.parser import parse_expression, parse_ring

K1 = FunctionField.standard(1)
K2 = FunctionField.standard(2)


def rand_rf(rng, fld, max_degree=3):
    R = fld.polyring
    def poly():
        p = R.zero
        for _ in range(rng.randint(1, 3)):
            mono = R(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
            for _ in range(rng.randint(0, max_degree)):
                mono = mono * rng.choice(R.gens)
            p = p + mono
        return p
    den = poly()
    while not den:
        den = poly()
    return RationalFunction(fld, poly(), den)


def leibniz_det(M):
    """Permutation expansion: independent of elimination."""
    n = len(M)
    total = M[0][0].field.zero
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = M[0][0].field.one
        for i in range(n):
            term = term * M[i][perm[i]]
        total = total - term if inv % 2 else total + term
    return total


def wr_oracle(fs):
    rows = [list(fs)]
    for _ in range(len(fs) - 1):
        rows.append([f.derive(1) for f in rows[-1]])
    return leibniz_det(rows)


def test_wronskian_examples():
    assert wronskian([rf(1, "1"), rf(1, "t1"), rf(1, "t1^2")]) == K1.convert(2)
    assert not wronskian([rf(1, "t1"), rf(1, "2*t1")])
    assert wronskian([rf(1, "1"), rf(1, "t1")]) == K1.one
    with pytest.raises(EmptyInput):
        wronskian([])


def test_wronskian_needs_one_parameter():
    with pytest.raises(ValueError):
        wronskian([K2.gen(1), K2.gen(2)])


def test_wronskian_of_rational_functions():
    f = rf(1, "1/t1")
    g = rf(1, "t1")
    assert wronskian([f, g]) == f * g.derive(1) - f.derive(1) * g
    assert str(wronskian([f, g])) == "2/t1"


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_wronskian_matches_permutation_expansion(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    fs = [rand_rf(rng, K1) for _ in range(n)]
    assert wronskian(fs) == wr_oracle(fs)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_wronskian_multilinear_and_alternating(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 3)
    fs = [rand_rf(rng, K1) for _ in range(n)]
    g = rand_rf(rng, K1)
    a, b = (K1.convert(Fraction(rng.randint(-5, 5), rng.randint(1, 4))) for _ in range(2))
    k = rng.randrange(n)
    mixed = fs[:k] + [a * fs[k] + b * g] + fs[k + 1 :]
    with_g = fs[:k] + [g] + fs[k + 1 :]
    assert wronskian(mixed) == a * wronskian(fs) + b * wronskian(with_g)
    i, j = rng.sample(range(n), 2)
    swapped = list(fs)
    swapped[i], swapped[j] = swapped[j], swapped[i]
    assert wronskian(swapped) == -wronskian(fs)
    # a constant-coefficient combination of the others gives 0
    dep = fs[:k] + [sum((fs[m] * K1.convert(m + 1) for m in range(n) if m != k), K1.zero)] + fs[k + 1 :]
    assert not wronskian(dep)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32))
def test_derivations_on_rational_functions(seed):
    rng = random.Random(seed)
    f, g = rand_rf(rng, K2, 2), rand_rf(rng, K2, 2)
    for i in (1, 2):
        assert (f * g).derive(i) == f.derive(i) * g + f * g.derive(i)
        assert (f + g).derive(i) == f.derive(i) + g.derive(i)
        if g:
            assert (f / g).derive(i) == (f.derive(i) * g - f * g.derive(i)) / (g * g)
    assert f.derive(1).derive(2) == f.derive(2).derive(1)
    assert f.derive(3) == K2.zero  # derivations beyond k act trivially


def test_constants_are_killed():
    assert not K2.convert(Fraction(7, 3)).derive(1)


def test_rf_arith_and_derive():
    a, b = rf(1, "t1 + 1"), rf(1, "t1 - 1")
    assert rf_arith_and_derive(a, b, "add") == rf(1, "2*t1")
    assert rf_arith_and_derive(a, b, "sub") == rf(1, "2")
    assert rf_arith_and_derive(a, b, "mul") == rf(1, "t1^2 - 1")
    assert rf_arith_and_derive(a, b, "div") * b == a
    assert rf_arith_and_derive(a * a, None, "derive_1") == rf(1, "2*t1 + 2")
    with pytest.raises(DivisionByZero):
        rf_arith_and_derive(a, K1.zero, "div")
    with pytest.raises(ValueError):
        rf_arith_and_derive(a, b, "pow")


def test_canonical_representation():
    x = rf(1, "(t1^2 - 1)/(2*t1 - 2)")
    assert x == rf(1, "1/2*t1 + 1/2")
    assert hash(x) == hash(rf(1, "1/2*t1 + 1/2"))


def test_specialization_commutes_with_derivation():
    ring = parse_ring("N=2,vars=y,params=u,v")
    phi = Specialization({"u": rf(2, "t1^2*t2"), "v": rf(2, "1/t2")}, K2)
    r = parse_expression("d1(u)*y + v*d2(y)^2 - u*v", ring)
    for i in (1, 2):
        assert check_derivation_compatible(phi, r, i)
    img = apply_specialization(phi, r)
    assert str(img) == "(1/t2)*d2(y)^2 + (2*t1*t2)*y - t1^2"
