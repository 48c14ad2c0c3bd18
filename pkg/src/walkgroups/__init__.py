"""walkgroups: finiteness and structure of the group of a weighted walk model.

The package decides, for small-step walk models with positive rational
weights confined to the d-dimensional orthant, whether the group generated
by the model's birational involutions is finite, identifies its structure
(dihedral orders in 2D, Coxeter type in 3D), and computes the elliptic
period ratio r(t) whose rationality characterizes finiteness in 2D.
"""

from .models import (
    ModelError,
    WeightedModel,
    SliceModel,
    H1Result,
    parse_model,
    normalize,
    inventory_eval,
    check_H1,
    central_weighting,
    drift,
    slice_model,
    model_seed,
    canonical_key,
)
from .groups import (
    GroupError,
    GroupVerdict,
    group_order,
    pair_order,
    jacobians_at,
    matrix_group_order,
)
from .geometry import (
    GeometryError,
    CriticalPoint,
    CovarianceData,
    ReflectionData,
    WeylVerdict,
    critical_point,
    covariance,
    dihedral_orders,
    reflection_group,
    weyl_check,
)
from .elliptic import (
    EllipticError,
    KernelCurve,
    EllipticInvariants,
    ProbeResult,
    R0Estimate,
    ThetaResiduals,
    kernel_curve,
    periods,
    r_of_t,
    rationality_probe,
    estimate_r0,
    verify_theta_identities,
    order10_residual,
)
from .walkcount import (
    CountTable,
    ZeroDriftCheck,
    walk_table,
    count_walks,
    series_terms,
    brute_force_count,
    zero_drift_check,
)
from .catalog import FAMILIES, MODELS, FamilySpec
from .classify import (
    CensusMismatch,
    Classify2DReport,
    WeylReport3D,
    enumerate_2d_unweighted,
    verify_family_4a,
    verify_order8_family,
    verify_order10_models,
    classify3d_check,
    verify_A3_B3_families,
    search3d,
)

__all__ = [
    "ModelError",
    "WeightedModel",
    "SliceModel",
    "H1Result",
    "parse_model",
    "normalize",
    "inventory_eval",
    "check_H1",
    "central_weighting",
    "drift",
    "slice_model",
    "model_seed",
    "canonical_key",
    "GroupError",
    "GroupVerdict",
    "group_order",
    "pair_order",
    "jacobians_at",
    "matrix_group_order",
    "GeometryError",
    "CriticalPoint",
    "CovarianceData",
    "ReflectionData",
    "WeylVerdict",
    "critical_point",
    "covariance",
    "dihedral_orders",
    "reflection_group",
    "weyl_check",
    "EllipticError",
    "KernelCurve",
    "EllipticInvariants",
    "ProbeResult",
    "R0Estimate",
    "ThetaResiduals",
    "kernel_curve",
    "periods",
    "r_of_t",
    "rationality_probe",
    "estimate_r0",
    "verify_theta_identities",
    "order10_residual",
    "CountTable",
    "ZeroDriftCheck",
    "walk_table",
    "count_walks",
    "series_terms",
    "brute_force_count",
    "zero_drift_check",
    "FAMILIES",
    "MODELS",
    "FamilySpec",
    "CensusMismatch",
    "Classify2DReport",
    "WeylReport3D",
    "enumerate_2d_unweighted",
    "verify_family_4a",
    "verify_order8_family",
    "verify_order10_models",
    "classify3d_check",
    "verify_A3_B3_families",
    "search3d",
]

__version__ = "0.1.0"
