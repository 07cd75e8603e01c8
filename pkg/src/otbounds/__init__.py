"""Explicit non-asymptotic bounds on the expected Wasserstein transport cost
between an i.i.d. empirical measure and its source distribution, with
constructive coupling-based verification."""

from .bounds import (
    BoundQuery,
    BoundReport,
    LiftPolicy,
    Route,
    Table,
    TableCell,
    ceil2,
    classify_regime,
    evaluate_bound,
    generate_table,
    min_q_for_theta,
    rate_exponent,
)
from .constants import (
    ConstantDetail,
    NormKind,
    RegimeKind,
    eps_p,
    gamma_lower_bound,
    h_factor,
    kappa_euclidean,
    kappa_max_norm,
    kd_upper,
    theta_factor,
    zeta_low_moment,
)
from .errors import (
    CapacityError,
    DomainError,
    NoBoundError,
    UnsupportedDimensionError,
)
from .harness import (
    DistributionSpec,
    VerifyConfig,
    VerifyReport,
    estimate_expected_cost,
    exact_moment,
    run_verification,
    sample_empirical,
    shipped_configs,
)
from .measures import DiscreteMeasure, TransportPlan
from .oracle import (
    enumerate_transport_cost,
    exact_transport_cost,
    exact_transport_cost_1d,
)
from .partition import (
    CouplingResult,
    PartitionTree,
    annulus_coupling,
    build_nested_partition,
    default_depth,
    hierarchical_coupling,
)
from .series import PsiParams, psi_bound, psi_exact

__version__ = "0.1.0"

__all__ = [
    "BoundQuery",
    "BoundReport",
    "CapacityError",
    "ConstantDetail",
    "CouplingResult",
    "DiscreteMeasure",
    "DistributionSpec",
    "DomainError",
    "LiftPolicy",
    "NoBoundError",
    "NormKind",
    "PartitionTree",
    "PsiParams",
    "RegimeKind",
    "Route",
    "Table",
    "TableCell",
    "TransportPlan",
    "UnsupportedDimensionError",
    "VerifyConfig",
    "VerifyReport",
    "annulus_coupling",
    "build_nested_partition",
    "ceil2",
    "classify_regime",
    "default_depth",
    "enumerate_transport_cost",
    "eps_p",
    "estimate_expected_cost",
    "evaluate_bound",
    "exact_moment",
    "exact_transport_cost",
    "exact_transport_cost_1d",
    "gamma_lower_bound",
    "generate_table",
    "h_factor",
    "hierarchical_coupling",
    "kappa_euclidean",
    "kappa_max_norm",
    "kd_upper",
    "min_q_for_theta",
    "psi_bound",
    "psi_exact",
    "rate_exponent",
    "run_verification",
    "sample_empirical",
    "shipped_configs",
    "theta_factor",
    "zeta_low_moment",
]
