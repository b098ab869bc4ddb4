"""Numerical toolkit for operators on spaces with a semidefinite inner product.

A positive semidefinite matrix A induces the semi-inner product
``<x, y>_A = <Ax, y>`` and with it deformed versions of the familiar
operator quantities: adjoint, seminorm, numerical radius, spectral radius,
and absolute value. This package computes those quantities, builds block
operator matrices over the lifted metric diag(A, ..., A), and verifies a
registry of upper and lower bounds relating them on seeded random
instances.
"""

from __future__ import annotations

__version__ = "0.1.0"

from ._records import BoundParams, CheckRecord, ScalarFnPair
from .catalog import (
    THEOREM_IDS,
    THEOREMS,
    TheoremInfo,
    evaluate,
    hypothesis_residuals,
    nxn_names,
    scalar_young,
)
from .generate import (
    FAMILIES,
    MAX_DIM,
    GenConfig,
    gen_instance,
    gen_metric,
    gen_operand,
    instance_families,
    mix64,
    trial_rng,
)
from .blocks import (
    BLOCK_PARTS,
    BlockMetric,
    block2,
    block_diag,
    block_identity_check,
    block_offdiag,
    blockn,
    offdiag_abs_check,
)
from .errors import (
    BadConfig,
    BadFamily,
    BadParams,
    DimensionMismatch,
    GenerationFailed,
    MatrixFormatError,
    NegativeSpectrum,
    NotAMember,
    NotHermitian,
    SemiopError,
    UnknownTheorem,
)
from .linalg import (
    HermEigen,
    herm_eig,
    hermitianize,
    num_radius,
    op_norm,
    pinv,
    psd_fn,
    rotation_max_eig,
    spec_radius,
)
from .metric import (
    ABoundedCert,
    Metric,
    a_abs,
    a_inner,
    a_norm_vec,
    a_num_radius,
    a_seminorm,
    a_spec_radius,
    a_unit_sample,
    a_vector_sample,
    compress,
    in_b_a,
    is_a_positive,
    is_a_selfadjoint,
    require_member,
    sharp,
)

__all__ = [
    "BadConfig",
    "BadFamily",
    "BadParams",
    "DimensionMismatch",
    "GenerationFailed",
    "MatrixFormatError",
    "NegativeSpectrum",
    "NotAMember",
    "NotHermitian",
    "SemiopError",
    "UnknownTheorem",
    "BoundParams",
    "CheckRecord",
    "ScalarFnPair",
    "THEOREM_IDS",
    "THEOREMS",
    "TheoremInfo",
    "evaluate",
    "hypothesis_residuals",
    "nxn_names",
    "scalar_young",
    "FAMILIES",
    "MAX_DIM",
    "GenConfig",
    "gen_instance",
    "gen_metric",
    "gen_operand",
    "instance_families",
    "mix64",
    "trial_rng",
    "BLOCK_PARTS",
    "BlockMetric",
    "block2",
    "block_diag",
    "block_identity_check",
    "block_offdiag",
    "blockn",
    "offdiag_abs_check",
    "HermEigen",
    "herm_eig",
    "hermitianize",
    "num_radius",
    "op_norm",
    "pinv",
    "psd_fn",
    "rotation_max_eig",
    "spec_radius",
    "ABoundedCert",
    "Metric",
    "a_abs",
    "a_inner",
    "a_norm_vec",
    "a_num_radius",
    "a_seminorm",
    "a_spec_radius",
    "a_unit_sample",
    "a_vector_sample",
    "compress",
    "in_b_a",
    "is_a_positive",
    "is_a_selfadjoint",
    "require_member",
    "sharp",
    "__version__",
]
