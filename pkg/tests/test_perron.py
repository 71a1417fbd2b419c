import math

import numpy as np
import pytest

from zetamoments.arith import sieve_dk, sieve_phi
from zetamoments.errors import DomainError, PoleError
from zetamoments.perron import (
    compare_sum_asymptotic, full_main_term, main_term_from_pole, partial_sum_inverse_power,
    perron_estimate, perron_kernel, perron_kernel_limit, perron_sum_estimate,
    perron_truncation_bound, series_catalog, square_table,
)
from zetamoments.special import EULER_GAMMA, zeta_reference


@pytest.mark.parametrize("A,N", [(0.5, 2), (2.0, 2), (3.0, 3), (0.3, 3), (5.0, 4)])
def test_kernel_limit(A, N):
    assert abs(perron_kernel(A, 1.0e4, N) - perron_kernel_limit(A, N)) < 1e-6


def test_kernel_n1_converges_slowly_toward_step():
    # the N = 1 kernel on Re s = 1 tends to [A > 1] with error <= A/(pi Y |log A|)
    for A, Y in ((2.0, 100.0), (2.0, 1000.0), (0.5, 300.0)):
        err = abs(perron_kernel(A, Y, 1) - perron_kernel_limit(A, 1))
        assert err <= A / (math.pi * Y * abs(math.log(A)))


def test_catalog_values_match_products():
    s = 2.5 + 1j
    assert abs(series_catalog("dk_pow(3)")(s) - zeta_reference(s) ** 3) < 1e-12
    d2 = series_catalog("d2")(s)
    assert abs(d2 - zeta_reference(s) ** 4 / zeta_reference(2 * s)) < 1e-12
    # Dirichlet series of d(n)^2 summed directly
    n = np.arange(1, 200_001, dtype=float)
    direct = np.sum(sieve_dk(2, 200_000).values.astype(float) ** 2 * n ** -4.0)
    assert series_catalog("d2")(4.0).real == pytest.approx(direct, rel=1e-9)
    with pytest.raises(DomainError):
        series_catalog("nope")


def test_perron_sum_small_X():
    F = series_catalog("zeta")
    est = perron_estimate(F, 6.5, 1.0 + 1 / math.log(6.5), tol=0.5, Y_max=2000.0)
    assert abs(est.value - 6.0) <= max(0.5, est.error_bound)


def test_truncation_bound_covers_error():
    F = series_catalog("dk_pow(2)")
    X, sigma, Y = 12.5, 1.4, 400.0
    est = perron_sum_estimate(F, X, sigma, Y).real
    truth = sieve_dk(2, 12).partial_sums()[-1]
    assert abs(est - truth) <= perron_truncation_bound(F, X, sigma, Y)


def test_perron_guards():
    F = series_catalog("zeta")
    with pytest.raises(DomainError):
        perron_sum_estimate(F, 10.0, 1.2, 100.0)
    with pytest.raises(PoleError):
        perron_sum_estimate(series_catalog("d2_over_n"), 10.5, 1e-13, 100.0)


def test_divisor_main_term_coefficients():
    # sum_{n<=X} d(n) = X log X + (2 gamma - 1) X + O(sqrt X)
    P = main_term_from_pole(series_catalog("dk_pow(2)"), (1.0, 2))
    assert P.x_power == 1.0
    assert P.coeffs[1] == pytest.approx(1.0, abs=1e-10)
    assert P.coeffs[0] == pytest.approx(2 * EULER_GAMMA - 1, abs=1e-10)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_dk_leading_coefficient(k):
    lead = main_term_from_pole(series_catalog(f"dk_pow({k})"), (1.0, k)).leading
    assert lead == pytest.approx(1 / math.factorial(k - 1), abs=1e-8)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_weighted_dk_leading_coefficient(k):
    # sum_{n<=X} d_k(n)/n has leading coefficient 1/k! in log X
    F = series_catalog(f"dk_pow({k})")
    shifted = type(F)(f"dk_over_n({k})", lambda s: F.evaluate(np.asarray(s) + 1.0), 0.0,
                      ((0.0, k),), -math.inf)
    lead = main_term_from_pole(shifted, (0.0, k)).leading
    assert lead == pytest.approx(1 / math.factorial(k), abs=1e-8)


def test_d2_over_n_and_phi_leading():
    assert main_term_from_pole(series_catalog("d2_over_n"), (0.0, 4)).leading == pytest.approx(
        1 / (4 * math.pi**2), abs=1e-10)
    assert main_term_from_pole(series_catalog("phi"), (2.0, 1)).leading == pytest.approx(
        3 / math.pi**2, abs=1e-10)


def test_undeclared_pole_rejected():
    with pytest.raises(DomainError):
        main_term_from_pole(series_catalog("zeta"), (1.0, 2))


def test_sum_asymptotics_moderate_X():
    X = 100_000
    rows = compare_sum_asymptotic(square_table(sieve_dk(2, X)), "1/n",
                                  full_main_term(series_catalog("d2_over_n")), [1000, X])
    assert abs(rows[-1]["rel_residual"]) < 1e-3
    phi = compare_sum_asymptotic(sieve_phi(X), "1", main_term_from_pole(series_catalog("phi"), (2.0, 1)), [X])
    assert abs(phi[0]["rel_residual"]) < 1e-3


def test_inverse_power_tail():
    total, predicted = partial_sum_inverse_power(1.0e4, 2.0)
    assert abs(total - predicted) <= 1e-7
    total, predicted = partial_sum_inverse_power(1.0e3, 3.0)
    assert abs(total - predicted) <= 1e-6
