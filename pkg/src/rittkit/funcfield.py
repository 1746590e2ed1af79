"""The differential field Q(t1..tk): specialization target and Wronskians."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .core import DiffPolynomial, DiffVariable, RingConfig
from .errors import DivisionByZero, EmptyInput, SpecializationDomainError
from .fields import FunctionField, RationalFunction, Rationals

__all__ = [
    "FunctionField",
    "RationalFunction",
    "Specialization",
    "apply_specialization",
    "check_derivation_compatible",
    "rf_arith_and_derive",
    "wronskian",
]


def rf_arith_and_derive(a: RationalFunction, b: RationalFunction | None, kind: str) -> RationalFunction:
    """``kind`` is add, sub, mul, div or derive_<i> (b is ignored for derive)."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        if not b:
            raise DivisionByZero("division by the zero rational function")
        return a / b
    if kind.startswith("derive_"):
        return a.derive(int(kind[len("derive_"):]))
    raise ValueError(f"unknown operation {kind!r}")


@dataclass
class Specialization:
    """Coefficient homomorphism R = K{u_1..u_r} -> Q(t1..tk).

    It is given on the differential generators u_i; images of derivatives
    of u_i are obtained by differentiating, so it commutes with every
    derivation by construction.
    """

    images: dict[str, RationalFunction]
    field: FunctionField
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_mapping(cls, images: Mapping, fld: FunctionField | None = None) -> Specialization:
        if fld is None:
            fld = next(
                (v.field for v in images.values() if isinstance(v, RationalFunction)),
                FunctionField.standard(1),
            )
        return cls({k: fld.convert(v) for k, v in images.items()}, fld)

    def image_of(self, ring: RingConfig, v: DiffVariable) -> RationalFunction:
        key = (ring.name_of(v.var_index), v.exponents)
        val = self._cache.get(key)
        if val is None:
            name = key[0]
            if name not in self.images:
                raise SpecializationDomainError(f"specialization undefined on {name!r}")
            val = self.images[name]
            for i, e in enumerate(v.exponents, start=1):
                for _ in range(e):
                    val = val.derive(i)
            self._cache[key] = val
        return val

    def target_ring(self, ring: RingConfig) -> RingConfig:
        return RingConfig(ring.n_derivations, ring.variables, self.field)

    def __call__(self, f: DiffPolynomial) -> DiffPolynomial:
        return apply_specialization(self, f)

    def __str__(self):
        return ", ".join(f"{k}->{v}" for k, v in sorted(self.images.items()))


def apply_specialization(phi, f: DiffPolynomial) -> DiffPolynomial:
    """Apply phi to every coefficient of f, giving f^phi over Q(t1..tk)."""
    if not isinstance(phi, Specialization):
        phi = Specialization.from_mapping(phi)
    src = f.ring
    fld = phi.field
    if isinstance(src.coefficient_field, FunctionField):
        if src.coefficient_field != fld:
            raise SpecializationDomainError("source and target parameter fields differ")
    elif not isinstance(src.coefficient_field, Rationals):
        raise SpecializationDomainError("specialization needs characteristic-0 coefficients")
    target = phi.target_ring(src)
    items = []
    for mono, c in f.items():
        coeff = fld.convert(c)
        unknown = []
        for v, e in mono:
            if v.var_index < 0:
                coeff = coeff * phi.image_of(src, v) ** e
            else:
                unknown.append((v, e))
        items.append((tuple(unknown), coeff))
    return DiffPolynomial.from_terms(target, items)


def check_derivation_compatible(phi, r: DiffPolynomial, i: int) -> bool:
    """Spot check psi(d_i r) == d_i psi(r)."""
    if not isinstance(phi, Specialization):
        phi = Specialization.from_mapping(phi)
    return apply_specialization(phi, r.derive(i)) == apply_specialization(phi, r).derive(i)


def _bareiss_det(M):
    """Determinant of a square matrix of sympy polynomials (fraction free)."""
    n = len(M)
    M = [row[:] for row in M]
    sign = 1
    prev = None
    for k in range(n - 1):
        if not M[k][k]:
            swap = next((r for r in range(k + 1, n) if M[r][k]), None)
            if swap is None:
                return M[0][0].ring.zero
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[k][k] * M[i][j] - M[i][k] * M[k][j]
                M[i][j] = num if prev is None else num.exquo(prev)
        prev = M[k][k]
    d = M[n - 1][n - 1]
    return d if sign > 0 else -d


def wronskian(fs: list[RationalFunction]) -> RationalFunction:
    """det(d^(i-1) f_j / dt^(i-1)) for functions of a single parameter.

    Each row is cleared of denominators, the polynomial determinant is
    computed by Bareiss elimination, and a single division restores the
    scaling.
    """
    if not fs:
        raise EmptyInput("the Wronskian of an empty list")
    fld = fs[0].field
    if len(fld.names) != 1:
        raise ValueError("the Wronskian needs a single derivation (one parameter)")
    n = len(fs)
    rows = [list(fs)]
    for _ in range(n - 1):
        rows.append([f.derive(1) for f in rows[-1]])
    R = fld.polyring
    polys, scale = [], R.one
    for row in rows:
        d = R.one
        for f in row:
            d = d.lcm(f.den)
        polys.append([f.num * d.exquo(f.den) for f in row])
        scale = scale * d
    return RationalFunction(fld, _bareiss_det(polys), scale)


def rf(field_or_k, src) -> RationalFunction:
    """Convenience constructor from an int, Fraction or expression string."""
    fld = field_or_k if isinstance(field_or_k, FunctionField) else FunctionField.standard(field_or_k)
    if isinstance(src, (int, Fraction)):
        return fld.convert(src)
    from .parser import parse_expression

    ring = RingConfig(0, (), fld)
    p = parse_expression(src, ring)
    return p.constant_coefficient()
