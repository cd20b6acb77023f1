"""Finite quantitative algebras over exact extended metric spaces.

The package makes the standard constructions computable on finite
instances: (pseudo)metric spaces with exact rational distances, products
and tensors, metric reflections, quantitative algebras with nonexpanding
operations, subcongruences as bounded pseudometric matrices, their
colimits and quotient algebras, quantitative equations, and variety
membership checks.
"""

from .distance import Dist, INF, ZERO, dist_max, dist_sum
from .errors import (
    CapExceededError,
    ConvergenceError,
    InvariantError,
    QuantalgError,
    StructuralError,
)
from .spaces import (
    MetricSpace,
    ProductResult,
    PseudoSpace,
    QuotientMap,
    SpaceMap,
    Violation,
    connected_components,
    coproduct,
    discrete_space,
    make_space,
    metric_reflection,
    product,
    product_space,
    singleton_space,
    space_violations,
    tensor,
    tuple_label,
)
from .terms import (
    Signature,
    Term,
    check_term,
    enumerate_terms,
    evaluate,
    hom_distance_bounded,
    op,
    parse_term,
    similar,
    substitute,
    term_distance,
    var,
)
from .algebras import (
    Homomorphism,
    OpViolation,
    QuantAlgebra,
    check_op_against_combiner,
    hom_distance,
    hom_violations,
    identity_hom,
    image_factorize,
    product_algebra,
    require_valid,
    subalgebra_generated,
    validate_algebra,
)
from .congruences import (
    CongruenceOnAlgebra,
    EffectivityResult,
    PairRelation,
    Subcongruence,
    UniversalCheck,
    check_effectivity,
    coequalizer,
    colimit,
    compatibility_violations,
    epsilon_kernel_pair,
    generated_congruence,
    identity_subcongruence,
    kernel_subcongruence,
    product_subcongruence,
    quotient_algebra,
    subcongruence_violations,
    universal_property_check,
)
from .varieties import (
    BirkhoffReport,
    BoundedFreeAlgebra,
    DemoReport,
    QuantEquation,
    SatisfactionResult,
    VarietyPresentation,
    VarietyReport,
    birkhoff_soundness,
    commutativity_equation,
    counterexample_demo,
    free_in_variety_bounded,
    in_variety,
    monoid_equations,
    monoid_signature,
    satisfies,
    truncated_addition_monoid,
)

__version__ = "0.1.0"
