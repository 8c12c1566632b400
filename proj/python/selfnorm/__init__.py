"""Edgeworth expansions and rate checks for self-normalized sums."""

from ._selfnorm import (
    Error,
    analytic_c2,
    catalog,
    conditional_cumulant,
    edgeworth_cdf,
    edgeworth_pdf,
    entropy_coefficients,
    gauss_hermite_inner,
    gaussian_exact_cdf,
    gaussian_exact_density,
    hermite,
    law_moments,
    mc_lambda_mean,
    normal_cdf,
    normal_pdf,
    rate_fit,
    run_cli,
    simulate,
)

__all__ = [
    "Error",
    "analytic_c2",
    "catalog",
    "conditional_cumulant",
    "edgeworth_cdf",
    "edgeworth_pdf",
    "entropy_coefficients",
    "gauss_hermite_inner",
    "gaussian_exact_cdf",
    "gaussian_exact_density",
    "hermite",
    "law_moments",
    "mc_lambda_mean",
    "normal_cdf",
    "normal_pdf",
    "rate_fit",
    "run_cli",
    "simulate",
]
