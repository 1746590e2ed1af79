"""The difference ring (Q[x], sigma) with sigma(x) = -x.

Principal transformally prime ideals, the fibres of the map induced by
x -> x^2 from (Q[x], identity), and the square-root obstruction to lifting
Q[x^2] -> (Q(y), identity) along Q[x^2] -> Q[x].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import zip_longest

from .errors import UnitOrZeroInput, UnsupportedDegree


class SigmaPoly:
    """Univariate polynomial over Q, coefficients stored low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = [Fraction(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def x(cls) -> SigmaPoly:
        return cls((0, 1))

    @classmethod
    def const(cls, a) -> SigmaPoly:
        return cls((a,))

    @classmethod
    def parse(cls, src: str, name: str = "x") -> SigmaPoly:
        from .core import RingConfig
        from .parser import parse_expression

        p = parse_expression(src, RingConfig(0, (name,)))
        coeffs: dict[int, Fraction] = {}
        for mono, c in p.items():
            coeffs[mono[0][1] if mono else 0] = c
        deg = max(coeffs, default=-1)
        return cls([coeffs.get(i, 0) for i in range(deg + 1)])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1]

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, SigmaPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _lift(other)
        return SigmaPoly(a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0))

    __radd__ = __add__

    def __neg__(self):
        return SigmaPoly(-a for a in self.coeffs)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        if not self or not other:
            return SigmaPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return SigmaPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        r = SigmaPoly.const(1)
        for _ in range(n):
            r = r * self
        return r

    def divmod(self, d: SigmaPoly) -> tuple[SigmaPoly, SigmaPoly]:
        if not d:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - d.degree, 1)
        while len(rem) - 1 >= d.degree and any(rem):
            k = len(rem) - 1 - d.degree
            c = rem[-1] / d.lc
            q[k] = c
            for i, b in enumerate(d.coeffs):
                rem[i + k] -= c * b
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return SigmaPoly(q), SigmaPoly(rem)

    def divides(self, other: SigmaPoly) -> bool:
        return not other.divmod(self)[1]

    def __call__(self, value):
        acc = Fraction(0)
        for a in reversed(self.coeffs):
            acc = acc * value + a
        return acc

    def compose_square(self) -> SigmaPoly:
        """f(x) -> f(x^2), the map induced by x -> x^2."""
        out = []
        for a in self.coeffs:
            out.extend((a, 0))
        return SigmaPoly(out)

    def monic(self) -> SigmaPoly:
        return SigmaPoly(a / self.lc for a in self.coeffs)

    def sigma(self) -> SigmaPoly:
        return sigma_apply(self)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            a = self.coeffs[k]
            if not a:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            mag = abs(a)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not parts:
                parts.append(("-" if a < 0 else "") + body)
            else:
                parts.append((" - " if a < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"SigmaPoly({self})"


def _lift(a) -> SigmaPoly:
    return a if isinstance(a, SigmaPoly) else SigmaPoly.const(a)


def sigma_apply(f: SigmaPoly) -> SigmaPoly:
    """Substitute x -> -x."""
    return SigmaPoly(a if k % 2 == 0 else -a for k, a in enumerate(f.coeffs))


def is_associate(p: SigmaPoly, q: SigmaPoly) -> bool:
    """p and q differ by a nonzero rational factor."""
    if not p or not q:
        return p == q
    return p.degree == q.degree and p * q.lc == q * p.lc


# ----------------------------------------------------------------------
# irreducibility over Q (degree <= 4)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def integer_primitive(f: SigmaPoly) -> list[int]:
    den = math.lcm(*(a.denominator for a in f.coeffs))
    ints = [int(a * den) for a in f.coeffs]
    g = math.gcd(*ints)
    return [a // g for a in ints]


def rational_roots(f: SigmaPoly) -> list[Fraction]:
    if not f:
        raise UnitOrZeroInput("the zero polynomial")
    c = integer_primitive(f)
    roots = set()
    k = 0
    while c[k] == 0:
        roots.add(Fraction(0))
        k += 1
    c = c[k:]
    if len(c) > 1:
        for p in _divisors(c[0]):
            for q in _divisors(c[-1]):
                for r in (Fraction(p, q), Fraction(-p, q)):
                    if f(r) == 0:
                        roots.add(r)
    return sorted(roots)


def _quadratic_factor(f: SigmaPoly) -> SigmaPoly | None:
    """A quadratic factor of a quartic without rational roots, if any."""
    c = integer_primitive(f)
    p1 = sum(c)
    if p1 == 0:
        return None
    for a in _divisors(c[-1]):
        for cc in _divisors(c[0]):
            for const in (cc, -cc):
                for s in _divisors(p1):
                    for ss in (s, -s):
                        b = ss - a - const
                        cand = SigmaPoly((const, b, a))
                        if cand.divides(f):
                            return cand
    return None


def is_irreducible(f: SigmaPoly) -> bool:
    if f.degree < 1:
        raise UnitOrZeroInput(f"{f} is zero or a unit")
    if f.degree == 1:
        return True
    if f.degree > 4:
        raise UnsupportedDegree(f"irreducibility is only decided up to degree 4, got {f.degree}")
    if rational_roots(f):
        return False
    if f.degree == 4:
        return _quadratic_factor(f) is None
    return True


def is_transformally_prime_principal(q: SigmaPoly) -> bool:
    """(q) is prime and sigma-stable, i.e. sigma(q) is an associate of q."""
    if q.degree < 1:
        raise UnitOrZeroInput(f"{q} is zero or a unit")
    return is_irreducible(q) and is_associate(sigma_apply(q), q)


# ----------------------------------------------------------------------
# fibres of x -> x^2


def rational_sqrt(n: Fraction) -> Fraction | None:
    n = Fraction(n)
    if n < 0:
        return None
    a, b = math.isqrt(n.numerator), math.isqrt(n.denominator)
    if a * a == n.numerator and b * b == n.denominator:
        return Fraction(a, b)
    return None


@dataclass
class DivisorCheck:
    divisor: SigmaPoly
    image: SigmaPoly
    sigma_stable: bool


@dataclass
class FiberResult:
    n: Fraction
    nonempty: bool
    witness: SigmaPoly | None
    trace: list[str] = field(default_factory=list)
    divisors: list[DivisorCheck] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "n": str(self.n),
            "nonempty": self.nonempty,
            "witness": None if self.witness is None else str(self.witness),
            "trace": list(self.trace),
            "divisors": [
                {"divisor": str(d.divisor), "sigma": str(d.image), "sigma_stable": d.sigma_stable}
                for d in self.divisors
            ],
        }


def fiber_nonempty(n) -> FiberResult:
    """Is there a transformally prime q in (Q[x], x->-x) over (x - n)?

    The base is (Q[x], identity) and the map sends x to x^2.
    """
    n = Fraction(n)
    x = SigmaPoly.x()
    base = x - n
    image = base.compose_square()
    res = FiberResult(n, False, None)
    res.trace.append(f"image of {base} under x -> x^2 is {image}")
    if n == 0:
        w = x
        res.trace.append(f"(x) is prime and sigma(x) = {sigma_apply(x)} is an associate of x")
    else:
        root = rational_sqrt(n)
        if root is None:
            w = image
            res.trace.append(f"{n} is not a rational square: {image} has no rational root")
            res.trace.append(f"sigma({image}) = {sigma_apply(image)}, an associate")
        else:
            w = None
            res.trace.append(f"{n} = ({root})^2, so {image} = ({x - root})*({x + root}) is not prime")
            for d in (x - root, x + root):
                sd = sigma_apply(d)
                stable = is_associate(sd, d)
                res.divisors.append(DivisorCheck(d, sd, stable))
                verdict = "associate" if stable else f"not an associate, ({d}) is not sigma-stable"
                res.trace.append(f"sigma({d}) = {sd}: {verdict}")
            res.trace.append(
                f"a sigma-stable prime containing {image} contains {x - root} or {x + root}, "
                f"hence both, hence their difference {2 * root}: it is not proper"
            )
    if w is not None:
        assert is_transformally_prime_principal(w)
        assert w.divides(image)
        res.nonempty = True
        res.witness = w
        res.trace.append(f"witness ({w}) contains {image}; its contraction is the maximal ideal ({base})")
    return res


# ----------------------------------------------------------------------
# the lifting obstruction


@dataclass
class ObstructionReport:
    exponent: int
    obstructed: bool
    facts: list[str]

    def __str__(self):
        return "\n".join(self.facts)

    def to_json(self) -> dict:
        return {"exponent": self.exponent, "obstructed": self.obstructed, "facts": list(self.facts)}


def lift_obstruction_demo(exponent: int = 1) -> ObstructionReport:
    """Check that x^2 -> y^k does not lift to x -> sqrt(y^k) inside Q(y).

    Any ring map Q[x] -> Q(y) restricting to x^2 -> y^k sends x to a square
    root of y^k.  A square (f/g)^2 has even degree difference
    deg(numerator) - deg(denominator); y^k has difference k.
    """
    from .fields import FunctionField

    Fy = FunctionField(("y",))
    y = Fy.gen(1)
    target = y**exponent
    x = SigmaPoly.x()
    x2 = x * x
    facts = []
    facts.append(f"sigma_S(x) = {sigma_apply(x)}; sigma_S(x^2) = {sigma_apply(x2)}, so sigma acts trivially on Q[x^2]")
    facts.append(f"phi: Q[x^2] -> Q(y) with trivial sigma sends x^2 to {target}")
    facts.append(f"any lift psi satisfies psi(x)^2 = psi(x^2) = {target}")
    dn, dd = target.degrees()
    diff = dn - dd
    facts.append(f"deg numerator - deg denominator of {target} is {dn} - {dd} = {diff}")
    facts.append("for f/g in Q(y), (f/g)^2 has degree difference 2*(deg f - deg g), which is even")
    obstructed = diff % 2 == 1
    if obstructed:
        facts.append(f"{diff} is odd, so {target} has no square root in Q(y): phi does not lift")
    else:
        facts.append(f"{diff} is even: the parity argument gives no obstruction")
    return ObstructionReport(exponent, obstructed, facts)
