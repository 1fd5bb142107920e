"""Numerical toolkit for sequential products on the standard effect algebra.

Effects, states and POVMs on finite-dimensional complex Hilbert spaces; a
two-parameter family of sequential products generalizing the square-root
product; measurement statistics; and operator-level checkers for the three
non-disturbance criteria between two measurements.
"""

from ._backend import BACKEND
from .matcore import (
    DEFAULT_TOL,
    DIM_CAP,
    SpectralDecomposition,
    Tolerances,
    adjoint,
    apply_borel_function,
    commutator_norm,
    frobenius_distance,
    hermitian_eigendecomposition,
    is_effect,
    is_hermitian,
    is_normal,
)
from .quantum import (
    DensityOperator,
    EffectOperator,
    Povm,
    commutes,
    complement,
    effect_in_basis,
    is_sharp,
    max_commutator,
    povms_compatible,
    random_commuting_povm_pair,
    random_commuting_povm_sharp_pair,
    random_density,
    random_effect,
    random_povm,
    random_pvm,
    random_unitary,
    validate_density,
    validate_effect,
    validate_povm,
)
from .seqprod import (
    MeasurementOutcomeTable,
    PhaseFamily,
    ZeroProbabilityError,
    conditional_probability,
    exact_joint_grid,
    heisenberg_image,
    luders_channel_state,
    phase_apply,
    post_state,
    probability,
    sample_sequential,
    sequential_product,
    two_step_conditional,
    verify_axioms,
    verify_functional_calculus,
)
from .criteria import (
    CriterionReport,
    CrossReport,
    commutation_classification,
    criterion1_check,
    criterion1_oracle,
    criterion2_check,
    criterion2_fixed_state,
    criterion3_check,
    cross_validate,
    normal_absorption_check,
    search_absorption_counterexample,
    search_criterion2_gap,
    verify_criteria_lattice,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DEFAULT_TOL",
    "DIM_CAP",
    "SpectralDecomposition",
    "Tolerances",
    "adjoint",
    "apply_borel_function",
    "commutator_norm",
    "frobenius_distance",
    "hermitian_eigendecomposition",
    "is_effect",
    "is_hermitian",
    "is_normal",
    "DensityOperator",
    "EffectOperator",
    "Povm",
    "commutes",
    "complement",
    "effect_in_basis",
    "is_sharp",
    "max_commutator",
    "povms_compatible",
    "random_commuting_povm_pair",
    "random_commuting_povm_sharp_pair",
    "random_density",
    "random_effect",
    "random_povm",
    "random_pvm",
    "random_unitary",
    "validate_density",
    "validate_effect",
    "validate_povm",
    "MeasurementOutcomeTable",
    "PhaseFamily",
    "ZeroProbabilityError",
    "conditional_probability",
    "exact_joint_grid",
    "heisenberg_image",
    "luders_channel_state",
    "phase_apply",
    "post_state",
    "probability",
    "sample_sequential",
    "sequential_product",
    "two_step_conditional",
    "verify_axioms",
    "verify_functional_calculus",
    "CriterionReport",
    "CrossReport",
    "commutation_classification",
    "criterion1_check",
    "criterion1_oracle",
    "criterion2_check",
    "criterion2_fixed_state",
    "criterion3_check",
    "cross_validate",
    "normal_absorption_check",
    "search_absorption_counterexample",
    "search_criterion2_gap",
    "verify_criteria_lattice",
]
