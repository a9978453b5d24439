"""Exact decision of simultaneous similarity for commuting matrix tuples."""

from .annihilator import ConditionC, annihilator_basis, condition_c_check, is_annihilating
from .errors import (
    NotCommuting, PreconditionFailed, ShapeMismatch, SimSimError, SingularMatrix,
)
from .exactnum import (
    GaussianRational, Matrix, determinant, format_scalar, inverse, kernel_basis,
    parse_scalar, rref,
)
from .krylov import (
    SubspaceBasis, find_cyclic_tuple, generated_subspace, is_cyclic, min_cyclic_k_estimate,
)
from .norms import (
    NormReport, hardy_truncation_demo, inequality_sample_test, optimal_constant,
    spectral_norm,
)
from .similarity import (
    SimilarityCertificate, Verdict, VerdictKind, conjugate, decide_similarity,
    intertwiner_space, synthesize_from_pair, verify_similarity,
)
from .tuples import (
    CommutingTuple, PolyVector, VectorTuple, evaluate, new_commuting_tuple,
    random_commuting_tuple, standard_basis,
)

__version__ = "0.1.0"
