"""Rotation and Lorentz invariants of vector/tensor systems.

Builds functional bases of absolute invariants of the metric-preserving
rotation group acting on named sets of vectors and rank-2 tensors, evaluates
and differentiates them, and verifies invariant counts and functional
independence with a numerical rank oracle.
"""
from ._version import __version__
from .expressions import (
    InvariantExpr,
    Sandwich,
    SlotKind,
    SlotRef,
    TraceWord,
    evaluate,
    evaluate_many,
    gradient,
    gradient_matrix,
    parse_expression,
    poincare_vector_potential_basis,
    render,
    theorem1_basis,
    theorem2_basis,
    theorem3_basis,
)
from .independence import (
    BasisReport,
    Claim,
    claimed_count,
    determining_defect,
    finite_defect,
    greedy_prune,
    jacobian_rank,
    verify_basis,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .rotations import (
    Generator,
    GroupElement,
    count_invariants,
    determining_matrix,
    exponentiate,
    generator_action,
    generators,
    generic_rank,
    numerical_rank,
    random_group_element,
)
from .systems import (
    MetricSignature,
    SystemSpec,
    TensorSymmetry,
    TensorSystem,
    decompose,
    random_system,
    unflatten,
)

__all__ = [
    "__version__",
    "KERNEL_BACKEND",
    "MetricSignature",
    "TensorSymmetry",
    "TensorSystem",
    "SystemSpec",
    "decompose",
    "unflatten",
    "random_system",
    "Generator",
    "GroupElement",
    "generators",
    "generator_action",
    "exponentiate",
    "random_group_element",
    "determining_matrix",
    "numerical_rank",
    "generic_rank",
    "count_invariants",
    "SlotKind",
    "SlotRef",
    "TraceWord",
    "Sandwich",
    "InvariantExpr",
    "evaluate",
    "evaluate_many",
    "gradient",
    "gradient_matrix",
    "render",
    "parse_expression",
    "theorem1_basis",
    "theorem2_basis",
    "theorem3_basis",
    "poincare_vector_potential_basis",
    "jacobian_rank",
    "greedy_prune",
    "verify_basis",
    "BasisReport",
    "Claim",
    "claimed_count",
    "determining_defect",
    "finite_defect",
]
