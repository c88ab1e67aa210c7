"""Synchronization certificates and simulation for coupled oscillator networks."""

from ._gridsync import (
    GridsyncError,
    Network,
    arc_length,
    classic_k_critical,
    classic_k_of_gamma,
    cohesiveness_norms,
    condition_appendix_concave,
    condition_appendix_pairwise,
    condition_appendix_pmin,
    condition_i,
    condition_ii,
    detect_frequency_sync,
    dihedral_cos,
    grnd,
    lambda2,
    laplacian,
    literature_bounds,
    load_network,
    necessary_condition,
    power_flow,
    rate_lambda_fe,
    rate_lambda_ps,
    rhs_grounded,
    rhs_kuramoto,
    rhs_swing,
    sample_arc_uniform,
    sample_two_norm_ball,
    simulate,
    solve_gamma,
    sp_compare,
    sync_frequency_omega,
    weighted_mean_angle,
)

__all__ = [
    "GridsyncError",
    "Network",
    "arc_length",
    "classic_k_critical",
    "classic_k_of_gamma",
    "cohesiveness_norms",
    "condition_appendix_concave",
    "condition_appendix_pairwise",
    "condition_appendix_pmin",
    "condition_i",
    "condition_ii",
    "detect_frequency_sync",
    "dihedral_cos",
    "grnd",
    "lambda2",
    "laplacian",
    "literature_bounds",
    "load_network",
    "necessary_condition",
    "power_flow",
    "rate_lambda_fe",
    "rate_lambda_ps",
    "rhs_grounded",
    "rhs_kuramoto",
    "rhs_swing",
    "sample_arc_uniform",
    "sample_two_norm_ball",
    "simulate",
    "solve_gamma",
    "sp_compare",
    "sync_frequency_omega",
    "weighted_mean_angle",
]

__version__ = "0.1.0"
