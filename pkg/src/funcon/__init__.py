"""Finite-domain workbench for the Galois connection between B-valued
functions on A and A-to-B relational constraints."""

from .core import (
    ArityMismatchError,
    BudgetExceededError,
    Constraint,
    ConstraintSet,
    DomainMismatchError,
    DomainSpec,
    FunctionClass,
    FunctionTable,
    Relation,
    TupleM,
    canonical_constraint,
    enumerate_constraints,
    enumerate_functions,
    projection,
    relaxation_of,
    tuple_rank,
    tuple_unrank,
)
from .satisfaction import (
    GaloisQuery,
    compose_classes,
    csf,
    csf_m,
    fsc,
    fsc_n,
    image,
    minimal_consequent,
    preserves,
    projections_class,
    satisfies,
    trace_constraint,
)
from .function_closures import (
    SubstitutionMap,
    lo_closure,
    lo_m_closure,
    substitute,
    vs_closure,
    vs_n_closure,
)
from .minors import (
    Scheme,
    compose_schemes,
    coord,
    indet,
    minor_check,
    special_minor,
    tight_minor,
)
from .lab import (
    ClosureReport,
    check_closure_laws,
    check_galois_axioms,
    fsc_n_of_csf_m,
    random_constraint_set,
    random_function_class,
    verify_definability,
    verify_factorization,
)
from .constraint_closures import (
    CmBounds,
    CmResult,
    cm_closure,
    cm_m_closure,
    cm_m_oracle,
    lo_constraints_closure,
    lo_n_closure,
    union_closure_check,
)

__version__ = "0.1.0"
