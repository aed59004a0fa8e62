"""Frobenius-splitting computations over prime fields.

Splitting numbers and signatures of pairs via colon-ideal reductions in a
polynomial ambient ring, splitting-prime candidates with rigorous
compatibility checks, splitting ratios, and the exact Newton-polyhedron
volume route for monomial pairs.
"""

from .groebner import (
    GroebnerBasis,
    Ideal,
    InternalInvariantError,
    ResourceLimitError,
    buchberger,
    ideal_membership,
    krull_dimension,
    normal_form,
    quotient_length,
)
from .ideals import (
    ExactDivisionError,
    bracket_power,
    colon,
    exact_divide,
    ideal_equals,
    ideal_power,
    ideal_product,
    ideal_sum,
    intersection,
)
from .newton import (
    ClippedPolytope,
    NewtonPolyhedron,
    clip,
    clip_and_volume,
    closure_membership,
    lattice_count,
    monomial_signature,
    newton_polyhedron,
)
from .poly import (
    DEGREVLEX,
    LEX,
    PolyParseError,
    PolyRing,
    Polynomial,
    PrimeField,
    RingMismatchError,
    TermOrder,
    frobenius_power,
    parse_polynomial,
    poly_arith,
)
from .signature import (
    InfeasibleError,
    MethodDisagreement,
    Row,
    SplittingReport,
    compatibility_check,
    is_f_pure,
    maximal_bracket,
    semigroup_data,
    signature_sequence,
    splitting_ideal,
    splitting_number,
    splitting_prime_candidate,
    splitting_ratio,
)
from .systems import (
    FGradedSystem,
    PairSystem,
    ProductSystem,
    QuotientSystem,
    make_system,
    power_exponent,
    verify_graded,
)

__version__ = "0.1.0"
