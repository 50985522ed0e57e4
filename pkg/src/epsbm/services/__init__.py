"""Verification, concentration, bounds and discretization services."""

from .bm_verifier import (
    BMCheckResult,
    BMParams,
    BMVerifyReport,
    bm_check_pair,
    bm_rhs,
    bm_verify_exhaustive,
    bm_verify_sampled,
    mc_root_error,
    uniform_t_grid,
)
from .bounds import bounds_table, gaussian_bound, improved_bound, theorem_chain_check
from .concentration import (
    ConcentrationProfile,
    alpha_exact,
    alpha_exact_search,
    alpha_greedy_search,
    alpha_lower_greedy,
    concentration_profile,
)
from .discretize import (
    DiscretizationResult,
    PointCloud,
    covering_radius,
    discretize_sphere,
    farthest_point_net,
    sphere_sample,
    voronoi_weights,
)
from .theorem_report import (
    TheoremReport,
    lemma_diameter_check,
    proof_trace,
    theorem_report,
)

__all__ = [
    "BMCheckResult",
    "BMParams",
    "BMVerifyReport",
    "ConcentrationProfile",
    "DiscretizationResult",
    "PointCloud",
    "TheoremReport",
    "alpha_exact",
    "alpha_exact_search",
    "alpha_greedy_search",
    "alpha_lower_greedy",
    "bm_check_pair",
    "bm_rhs",
    "bm_verify_exhaustive",
    "bm_verify_sampled",
    "bounds_table",
    "concentration_profile",
    "covering_radius",
    "discretize_sphere",
    "farthest_point_net",
    "gaussian_bound",
    "improved_bound",
    "lemma_diameter_check",
    "mc_root_error",
    "proof_trace",
    "sphere_sample",
    "theorem_chain_check",
    "theorem_report",
    "uniform_t_grid",
    "voronoi_weights",
]
