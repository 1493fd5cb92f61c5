"""Geometric complexity of binary-input logistic regression models."""

from lrcomplex._core import (  # noqa: F401
    __version__,
    all_configurations,
    bound_envelope,
    complexity_closed_form,
    complexity_monte_carlo,
    complexity_quadrature,
    complexity_regularized_asymptotic,
    complexity_regularized_spherical,
    critical_dimension,
    degenerate_complexity,
    degenerate_upper_bound,
    delta_rank,
    design_rank,
    empirical_distribution,
    entropy_bits,
    enumerate_key_models,
    fisher_information,
    fit_l1_cv,
    fit_mle,
    generate_output,
    ising_distribution,
    loglik,
    penalty_aic,
    penalty_bic,
    penalty_heuristic,
    reconstruction_error,
    sample_ground_truth,
    sample_ising,
    search_decimation,
    search_exhaustive,
    search_forward,
    upper_bound_triangular,
)
