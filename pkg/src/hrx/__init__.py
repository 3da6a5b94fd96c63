"""Higher-order expansions of bivariate Gaussian maxima toward their
max-stable limits: exact finite-n distributions, closed-form expansion
coefficients, correlation-sequence constructors, and the verification
oracles and CLI gluing them together."""

from .gauss import (
    bivariate_normal_cdf,
    bivariate_normal_survival,
    std_normal_cdf,
    std_normal_pdf,
    std_normal_quantile,
    std_normal_survival,
)
from .hr_core import (
    ApproxOrder,
    HRParams,
    I_closed,
    LambdaRegime,
    gumbel_cdf,
    hr_approx,
    hr_cdf,
    kappa,
    kappa1,
    s_term,
    t_term,
    tau,
    tau1,
    tau2,
    tau3,
    univariate_gumbel_approx,
)
from .norming import NormingConstant, bn_expansion_residual, solve_bn, threshold
from .oracle import (
    I_k_quadrature,
    QuadratureConvergenceError,
    QuadratureResult,
    mc_triangular_maxima,
    quad_semi_infinite,
)
from .triangular import (
    ArrayRow,
    ConstantRho,
    ConvergenceRecord,
    CorollaryInfinity,
    CorollaryZero,
    RhoSequenceSpec,
    ThirdOrderHR,
    a_coefficients,
    delta_error,
    exact_joint_max_cdf,
    h_n_diagnostic,
    lemma31_tail_approx,
    make_row,
)
from .cli import RateFit, StudyConfig, fit_rate, run_study

__version__ = "0.1.0"

__all__ = [
    "ApproxOrder",
    "ArrayRow",
    "ConstantRho",
    "ConvergenceRecord",
    "CorollaryInfinity",
    "CorollaryZero",
    "HRParams",
    "I_closed",
    "I_k_quadrature",
    "LambdaRegime",
    "NormingConstant",
    "QuadratureConvergenceError",
    "QuadratureResult",
    "RateFit",
    "RhoSequenceSpec",
    "StudyConfig",
    "ThirdOrderHR",
    "a_coefficients",
    "bivariate_normal_cdf",
    "bivariate_normal_survival",
    "bn_expansion_residual",
    "delta_error",
    "exact_joint_max_cdf",
    "fit_rate",
    "gumbel_cdf",
    "h_n_diagnostic",
    "hr_approx",
    "hr_cdf",
    "kappa",
    "kappa1",
    "lemma31_tail_approx",
    "make_row",
    "mc_triangular_maxima",
    "quad_semi_infinite",
    "run_study",
    "s_term",
    "solve_bn",
    "std_normal_cdf",
    "std_normal_pdf",
    "std_normal_quantile",
    "std_normal_survival",
    "t_term",
    "tau",
    "tau1",
    "tau2",
    "tau3",
    "threshold",
    "univariate_gumbel_approx",
    "__version__",
]
