"""Simes-type multiple testing procedures and order-statistic probability bounds.

Core layout:

- :mod:`simeslab.dependence`: correlation matrices and MTP2 matrix conditions
- :mod:`simeslab.samplers`: seeded multivariate normal / t / absolute sampling
- :mod:`simeslab.orderstats`: R_n, exact boundary non-crossing, identity checks
- :mod:`simeslab.procedures`: Simes / Hochberg / BH tests and critical values
- :mod:`simeslab.verify`: Monte Carlo verification of the probability bounds
- :mod:`simeslab.twosample`: distribution-free two-sample test with exact null
- :mod:`simeslab.service` / :mod:`simeslab.cli`: HTTP API and its CLI client
"""

from .dependence import (
    CorrelationMatrix,
    SignatureMatrix,
    cholesky_factor,
    equicorrelated,
    mtp2_normal_check,
    precision_matrix,
    sign_balance_check,
)
from .orderstats import (
    Boundary,
    check_decomposition_identity,
    check_factorial_identity,
    compute_rn,
    noncrossing_probability,
    tail_event_probability_iid,
)
from .procedures import (
    MaxMinCdf,
    TestOutcome,
    benjamini_hochberg,
    generalized_critical_values,
    generalized_simes_test,
    hochberg,
    max_k_cdf_equicorrelated,
    min_k_cdf_equicorrelated,
    simes_critical_values,
    simes_test,
    student_t_cdf,
    student_t_quantile,
)
from .samplers import ModelSpec, SampleBatch, chi_over_sqrt_nu, prob_transform, sample
from .twosample import (
    NullDistribution,
    TwoSampleData,
    tn_null_distribution,
    tn_statistic,
    tn_test,
)
from .verify import (
    EqualityReport,
    ExperimentConfig,
    VerificationReport,
    equality_check_independence,
    explore_generalized_t,
    verify_inequality,
    verify_theorem31,
)

__version__ = "0.1.0"

__all__ = [
    "Boundary",
    "CorrelationMatrix",
    "EqualityReport",
    "ExperimentConfig",
    "MaxMinCdf",
    "ModelSpec",
    "NullDistribution",
    "SampleBatch",
    "SignatureMatrix",
    "TestOutcome",
    "TwoSampleData",
    "VerificationReport",
    "benjamini_hochberg",
    "check_decomposition_identity",
    "check_factorial_identity",
    "chi_over_sqrt_nu",
    "cholesky_factor",
    "compute_rn",
    "equality_check_independence",
    "equicorrelated",
    "explore_generalized_t",
    "generalized_critical_values",
    "generalized_simes_test",
    "hochberg",
    "max_k_cdf_equicorrelated",
    "min_k_cdf_equicorrelated",
    "mtp2_normal_check",
    "noncrossing_probability",
    "precision_matrix",
    "prob_transform",
    "sample",
    "sign_balance_check",
    "simes_critical_values",
    "simes_test",
    "student_t_cdf",
    "student_t_quantile",
    "tail_event_probability_iid",
    "tn_null_distribution",
    "tn_statistic",
    "tn_test",
    "verify_inequality",
    "verify_theorem31",
]
