"""Numerical toolkit for zeta on the critical line, Dirichlet-polynomial mean
values, zeta moments, Perron-formula asymptotics and moment-conjecture
constants."""

from .arith import ArithTable, dirichlet_convolve, sieve_dk, sieve_mu, sieve_phi
from .conjecture import (
    LocalFactorSeries, ZetaFactorization, a_k, conjectured_moment,
    dirichlet_poly_moment_prediction, estermann_factorize, g_k, pole_order_from_local,
)
from .dirichlet import (
    DirichletPolynomial, mv_envelope, second_moment_exact, zeta_afe, zeta_squared_afe,
)
from .errors import (
    AccuracyDomainError, BudgetExceededError, CapacityError, ContourError, DomainError,
    LengthMismatchError, PoleError, ToleranceError, ZetaMomentsError,
)
from .moments import (
    MomentReport, QuadratureConfig, integrate_moment, predicted_main_term, signed_first_moment,
)
from .perron import (
    DirichletSeriesSpec, compare_sum_asymptotic, full_main_term, main_term_from_pole,
    perron_kernel, perron_sum_estimate, series_catalog,
)
from .special import (
    EULER_GAMMA, LaurentExpansion, chi_asymptotic, chi_exact, complex_log_gamma, hardy_z,
    laurent_at_pole, riemann_siegel_theta, zeta_reference, zeta_truncated_sum,
)

__version__ = "0.1.0"
