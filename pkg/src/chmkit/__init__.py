"""chmkit: search, construction, and classification of complex Hadamard matrices."""

__version__ = "0.1.0"

from .core import (
    PhaseMatrix,
    EquivalencePair,
    VerifiedChm,
    apply_equivalence,
    butson_order,
    dephase,
    is_hadamard,
    objective_Z,
    random_equivalence,
    sinkhorn_step,
    unimodularize,
)
from .invariants import (
    HaagerupSet,
    InvariantProfile,
    certify_inequivalent,
    defect,
    haagerup_cardinality,
    haagerup_set,
    profile,
    symmetric_haagerup_bound,
)
from .kernel import (
    NonlinearSystem,
    SolverConfig,
    SvdResult,
    numerical_rank,
    polar_unitary,
    singular_values,
    solve_least_squares,
    svd,
)
from .polynomials import (
    Polynomial,
    is_palindromic,
    palindromic_expand,
    palindromic_reduce,
    roots,
)
from .sinkhorn import SinkhornConfig, SinkhornOutcome, random_seed, run, search
