"""permlab: arrangements of numbers or group elements with constrained
adjacent labels (sums, differences, distances, products), built either by
direct construction or by exact backtracking search."""

__version__ = "0.1.0"

from .algebra import (
    Arrangement,
    CyclicProduct,
    GroundSet,
    Integers,
    IntegerVectors,
    PrimeField,
    PrimePowerField,
    field_make,
    group_add,
    group_cmp,
    group_neg,
    sylow2_cyclic,
)
from .numtheory import (
    PredicateSpec,
    euler_phi,
    eval_predicate,
    find_primitive_root,
    is_prime,
    is_primitive_root,
    is_quadratic_residue,
    primes_upto,
)
from .search import (
    Constraint,
    PredicateClause,
    RainbowClause,
    SearchOutcome,
    brute_force_enumerate,
    canonical_form,
    check,
    search,
)

__all__ = [
    "__version__",
    "Arrangement",
    "Constraint",
    "CyclicProduct",
    "GroundSet",
    "Integers",
    "IntegerVectors",
    "PredicateClause",
    "PredicateSpec",
    "PrimeField",
    "PrimePowerField",
    "RainbowClause",
    "SearchOutcome",
    "brute_force_enumerate",
    "canonical_form",
    "check",
    "euler_phi",
    "eval_predicate",
    "field_make",
    "find_primitive_root",
    "group_add",
    "group_cmp",
    "group_neg",
    "is_prime",
    "is_primitive_root",
    "is_quadratic_residue",
    "primes_upto",
    "search",
    "sylow2_cyclic",
]
