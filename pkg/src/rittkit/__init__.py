"""Exact differential-algebra kernel: Ritt reduction, characteristic sets,
specialization witnesses, and small difference-field examples."""

from .chevalley import (
    ConsistencyVerdict,
    Presentation,
    prime_lift_check,
    specialize_and_check,
    witness_algebraic,
    witness_chain,
    witness_transcendental,
)
from .core import (
    DiffPolynomial,
    DiffVariable,
    Rank,
    RingConfig,
    arith,
    derive,
    h_product,
    initial_separant,
    leader,
    rank_of,
)
from .difference import (
    SigmaPoly,
    fiber_nonempty,
    is_transformally_prime_principal,
    lift_obstruction_demo,
    sigma_apply,
)
from .fields import FunctionField, PrimeField, RationalFunction, Rationals
from .funcfield import Specialization, apply_specialization, rf_arith_and_derive, wronskian
from .parser import parse_expression, parse_expressions, parse_ring
from .reduction import (
    AutoreducedSet,
    CertifiedMember,
    ReducedNonzero,
    ReductionCertificate,
    UnitIdeal,
    characteristic_set,
    coherence_check,
    full_reduce,
    is_autoreduced,
    membership,
)

__version__ = "0.1.0"

__all__ = [
    "AutoreducedSet",
    "CertifiedMember",
    "ConsistencyVerdict",
    "DiffPolynomial",
    "DiffVariable",
    "FunctionField",
    "Presentation",
    "PrimeField",
    "Rank",
    "RationalFunction",
    "Rationals",
    "ReducedNonzero",
    "ReductionCertificate",
    "RingConfig",
    "SigmaPoly",
    "Specialization",
    "UnitIdeal",
    "apply_specialization",
    "arith",
    "characteristic_set",
    "coherence_check",
    "derive",
    "fiber_nonempty",
    "full_reduce",
    "h_product",
    "initial_separant",
    "is_autoreduced",
    "is_transformally_prime_principal",
    "leader",
    "lift_obstruction_demo",
    "membership",
    "parse_expression",
    "parse_expressions",
    "parse_ring",
    "prime_lift_check",
    "rank_of",
    "rf_arith_and_derive",
    "sigma_apply",
    "specialize_and_check",
    "witness_algebraic",
    "witness_chain",
    "witness_transcendental",
    "wronskian",
]
