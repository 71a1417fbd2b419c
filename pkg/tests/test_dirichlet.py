import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from zetamoments import calibration
from zetamoments.dirichlet import (
    DirichletPolynomial, afe_length, mean_value_kernel, mv_envelope, second_moment_exact,
    zeta_afe, zeta_squared_afe,
)
from zetamoments.errors import DomainError
from zetamoments.special import zeta_reference


def quad_second_moment(P: DirichletPolynomial, T: float) -> float:
    f = lambda t: abs(P(1j * t)) ** 2  # noqa: E731
    pieces = np.linspace(0, T, int(T) + 2)
    return math.fsum(integrate.quad(f, a, b, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
                     for a, b in zip(pieces[:-1], pieces[1:]))


def test_kernel_matches_direct_integral():
    for lam, T in [(0.0, 7.0), (1e-9, 7.0), (0.3, 10.0), (2.0, 3.5)]:
        re = integrate.quad(lambda t: math.cos(lam * t), 0, T)[0]
        im = integrate.quad(lambda t: math.sin(lam * t), 0, T)[0]
        assert abs(mean_value_kernel(np.array(lam), T) - complex(re, im)) < 1e-12


def test_two_term_closed_form():
    T = 10.0
    res = second_moment_exact(DirichletPolynomial([1.0, 1.0]), T)
    expected = 2 * T + 2 * math.sin(T * math.log(2)) / math.log(2)
    assert res.total == pytest.approx(expected, rel=1e-14)
    assert res.main == pytest.approx(2 * T)


def test_against_scipy_quadrature():
    rng = np.random.default_rng(3)
    for _ in range(8):
        N = int(rng.integers(1, 9))
        T = float(rng.uniform(1, 30))
        P = DirichletPolynomial(rng.normal(size=N) + 1j * rng.normal(size=N))
        assert second_moment_exact(P, T).total == pytest.approx(quad_second_moment(P, T), rel=1e-9)


def test_parallel_result_is_bitwise_identical():
    rng = np.random.default_rng(0)
    P = DirichletPolynomial(rng.normal(size=3000))
    a = second_moment_exact(P, 500.0, jobs=1)
    b = second_moment_exact(P, 500.0, jobs=4)
    assert a == b


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 120), st.floats(0.5, 2000.0), st.integers(0, 2**32 - 1))
def test_montgomery_vaughan_envelope(N, T, seed):
    rng = np.random.default_rng(seed)
    P = DirichletPolynomial(rng.normal(size=N) + 1j * rng.normal(size=N))
    res = second_moment_exact(P, T)
    assert abs(res.cross) <= calibration.get("mv_constant") * mv_envelope(P)
    assert res.total >= -1e-9 * res.main  # a mean square is nonnegative


def test_poly_eval_matches_direct_sum():
    a = np.array([1.0, -0.5j, 2.0])
    P = DirichletPolynomial(a)
    s = 0.3 + 4j
    assert abs(P(s) - sum(a[n - 1] * n**-s for n in (1, 2, 3))) < 1e-14


def test_afe_error_bound_and_length():
    assert afe_length(1000.0) == 12
    t = np.array([100.0, 777.0, 5000.0, 40000.0])
    s = 0.5 + 1j * t
    err = np.abs(zeta_afe(s) - zeta_reference(s))
    assert np.all(err <= calibration.get("afe_slack") * (t / (2 * math.pi)) ** -0.25)


def test_zeta_squared_afe_at_1000():
    s = 0.5 + 1000j
    err = abs(zeta_squared_afe(s) - zeta_reference(s) ** 2)
    assert err <= calibration.get("zeta_squared_afe_abs_t1000")


def test_afe_domain():
    with pytest.raises(DomainError):
        zeta_afe(0.6 + 100j)
    with pytest.raises(DomainError):
        zeta_afe(0.5 + 10j)
    with pytest.raises(ValueError):
        DirichletPolynomial([])
