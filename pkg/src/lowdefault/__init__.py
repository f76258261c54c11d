"""Long-run probability-of-default estimation for low default portfolios.

Upper confidence bounds and Bayesian posterior-mean estimators for the
one-period independent, one-period correlated, and multi-period correlated
default models, plus a CLI that reproduces the standard report layout.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .correlated import (
    CorrelatedObservation,
    conservative_bayes_correlated,
    neutral_bayes_correlated,
    ucb_correlated,
)
from .data_io import (
    DatasetRecord,
    builtin_dataset,
    builtin_names,
    parse_csv,
    serialize_csv,
)
from .distributions import (
    BetaParams,
    CorrBinomialParams,
    beta_cdf,
    beta_pdf,
    beta_quantile,
    binomial_cdf,
    bivariate_normal_cdf,
    corr_binomial_cdf,
    corr_binomial_mean_var,
    corr_binomial_pmf,
    g_conditional_pd,
    std_normal_cdf,
    std_normal_quantile,
)
from .multi_period import (
    DEFAULT_LEVELS,
    CorrelationParams,
    DefaultTimeSeries,
    GridConfig,
    MLEResult,
    SystemicFactorSample,
    build_sigma,
    conditional_likelihood,
    conservative_bayes_multi,
    marginal_likelihood,
    mle_fit,
    mle_fit_lambda,
    multi_run_report,
    neutral_bayes_multi,
    sample_systemic_factors,
    ucb_multi,
)
from .one_period import (
    ConfidenceLevel,
    PortfolioObservation,
    PriorConstraint,
    conservative_bayes_independent,
    naive_estimate,
    neutral_bayes_independent,
    posterior_cdf_conservative,
    posterior_density_uniform,
    ucb_independent,
)

__version__ = "0.1.0"
