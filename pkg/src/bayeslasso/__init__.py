"""Lasso distribution numerics and Gibbs samplers for Bayesian lasso regression."""

__version__ = "0.1.0"

from .data import Dataset, RegressionData, load_csv, standardize, synth_regression
from .diagnostics import (
    DiagnosticsReport,
    ess_bulk,
    efficiency,
    mix_percent,
    split_r_hat,
    summarize_chains,
)
from .distribution import (
    ClassifyTolerances,
    ExpFamilyDecomposition,
    LassoParams,
    LimitClass,
    MixtureRep,
    classify_limit,
    exp_family_decomposition,
    lasso_cdf,
    lasso_mgf,
    lasso_mode,
    lasso_moment,
    lasso_pdf,
    lasso_quantile,
    lasso_sample,
    make_mixture_rep,
)
from .gibbs import (
    ChainOutput,
    GibbsConfig,
    PriorHyperparams,
    coordinate_params,
    hans_gibbs,
    pc_gibbs,
    run_chains,
)
from .samplers import (
    RngStream,
    SliceConfig,
    asymmetric_laplace_sample,
    gamma_sample,
    inverse_gamma_sample,
    inverse_gaussian_sample,
    mvn_sample,
    slice_sample_step,
    trunc_normal_moments,
)
from .special import (
    log_mills_ratio,
    log_normal_cdf,
    mills_ratio,
    mills_ratio_positive,
    normal_quantile_from_log,
)

__all__ = [
    "__version__",
    "Dataset", "RegressionData", "load_csv", "standardize", "synth_regression",
    "DiagnosticsReport", "ess_bulk", "efficiency", "mix_percent",
    "split_r_hat", "summarize_chains",
    "ClassifyTolerances", "ExpFamilyDecomposition", "LassoParams",
    "LimitClass", "MixtureRep", "classify_limit", "exp_family_decomposition",
    "lasso_cdf", "lasso_mgf", "lasso_mode", "lasso_moment", "lasso_pdf",
    "lasso_quantile", "lasso_sample", "make_mixture_rep",
    "ChainOutput", "GibbsConfig", "PriorHyperparams", "coordinate_params",
    "hans_gibbs", "pc_gibbs", "run_chains",
    "RngStream", "SliceConfig", "asymmetric_laplace_sample", "gamma_sample",
    "inverse_gamma_sample", "inverse_gaussian_sample", "mvn_sample",
    "slice_sample_step", "trunc_normal_moments",
    "log_mills_ratio", "log_normal_cdf", "mills_ratio",
    "mills_ratio_positive", "normal_quantile_from_log",
]
