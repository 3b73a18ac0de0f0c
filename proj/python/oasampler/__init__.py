"""Ordered allocation Gibbs sampler for Bayesian mixture models."""

try:
    from ._oas import *  # installed package layout
except ImportError:  # in-tree builds put _oas on PYTHONPATH
    from _oas import *

__all__ = [
    "MixingPrior",
    "eppf_two_param",
    "eppf_mfm_given_m",
    "eppf_gnedin_marginal",
    "gnedin_prior_pmf",
    "gnedin_m_posterior",
    "iat",
    "synthetic",
    "permute",
    "exact_partition_posterior",
    "run_chain",
    "run_experiment",
]
