"""Damage identification in clamped plates from frequency response functions.

The package discretizes a cantilevered plate with Mindlin bending elements,
interpolates a per-element material field with SIMP, and recovers voids by
minimizing an FRF mismatch objective plus an L1 material penalty under box
constraints, with gradients from the adjoint method.
"""

from .fem import (
    CHI_MIN,
    MaterialModel,
    PlateModel,
    SimpParams,
    assemble,
    build_model,
    calibrate_youngs_modulus,
    compute_frf,
    dynamic_stiffness,
    element_matrices,
    harmonic_solve,
    natural_frequencies,
)
from .gradients import (
    ObjectiveBreakdown,
    adjoint_gradient,
    evaluate_design,
    finite_difference_gradient,
    value_and_gradient,
)
from .mesh import (
    BoundarySpec,
    Mesh,
    PlateGeometry,
    build_mesh,
    constrained_dofs,
    locate_dof,
)
from .objectives import (
    DesignField,
    FrfDataset,
    ObjectiveConfig,
    error_vector,
    lasso_gradient,
    lasso_penalty,
    mac_mismatch,
    mac_sum_objective,
    mse_objective,
    total_objective,
)
from .optimizer import (
    IterationRecord,
    OptimHistory,
    OptimSettings,
    TerminationDecision,
    check_termination,
    identify,
)
from .synth import NoiseSpec, NotchSpec, apply_noise, notch_truth, synth_dataset

__all__ = [
    "CHI_MIN",
    "BoundarySpec",
    "DesignField",
    "FrfDataset",
    "IterationRecord",
    "MaterialModel",
    "Mesh",
    "NoiseSpec",
    "NotchSpec",
    "ObjectiveBreakdown",
    "ObjectiveConfig",
    "OptimHistory",
    "OptimSettings",
    "PlateGeometry",
    "PlateModel",
    "SimpParams",
    "TerminationDecision",
    "adjoint_gradient",
    "apply_noise",
    "assemble",
    "build_mesh",
    "build_model",
    "calibrate_youngs_modulus",
    "check_termination",
    "compute_frf",
    "constrained_dofs",
    "dynamic_stiffness",
    "element_matrices",
    "error_vector",
    "evaluate_design",
    "finite_difference_gradient",
    "harmonic_solve",
    "identify",
    "lasso_gradient",
    "lasso_penalty",
    "locate_dof",
    "mac_mismatch",
    "mac_sum_objective",
    "mse_objective",
    "natural_frequencies",
    "notch_truth",
    "synth_dataset",
    "total_objective",
    "value_and_gradient",
]
