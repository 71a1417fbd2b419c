"""Constants of the moment conjecture and zeta-factorization of Euler products.

``g_k`` is exact (``fractions.Fraction``), ``a_k`` is a truncated Euler
product with an explicit bound on what the truncation leaves out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .arith import primes_up_to, sieve_dk
from .dirichlet import DirichletPolynomial, second_moment_exact
from .errors import DomainError, ToleranceError

GK_MAX = 20


def g_k(k: int) -> Fraction:
    """(k^2)! prod_{j<k} j!/(k+j)!, kept as an exact fraction."""
    if not 0 <= k <= GK_MAX:
        raise DomainError(f"g_k is tabulated for 0 <= k <= {GK_MAX}")
    num = factorial(k * k)
    den = 1
    for j in range(k):
        num *= factorial(j)
        den *= factorial(k + j)
    return Fraction(num, den)


# ---------------------------------------------------------------------- a_k

@dataclass(frozen=True)
class EulerProductValue:
    value: float
    rel_tail_bound: float  # |true / value - 1| <= rel_tail_bound
    prime_cutoff: int
    m_cutoff: int


def local_series_coeffs(k: int, m_cutoff: int) -> list[int]:
    """d_k(p^m)^2 = C(k+m-1, m)^2 for m = 0..m_cutoff."""
    return [comb(k + m - 1, m) ** 2 for m in range(m_cutoff + 1)]


def local_factor_exact(k: int, p: int) -> Fraction:
    """(1-1/p)^{k^2} sum_{m>=0} d_k(p^m)^2 p^{-m} as an exact fraction.

    The full series sums to sum_{j<k} C(k-1,j)^2 x^j / (1-x)^{2k-1}, so the
    local factor is the polynomial (1-x)^{(k-1)^2} sum_{j<k} C(k-1,j)^2 x^j.
    """
    if k < 1 or p < 2:
        raise DomainError("need k >= 1 and p >= 2")
    x = Fraction(1, p)
    return (1 - x) ** ((k - 1) ** 2) * sum(comb(k - 1, j) ** 2 * x**j for j in range(k))


def _m_truncation_bound(k: int, m_cutoff: int) -> float:
    # relative size of sum_{m > M} C(k+m-1,m)^2 2^{-m}, geometric majorant at p = 2
    ratio = ((k + m_cutoff) / (m_cutoff + 1)) ** 2 / 2
    if ratio >= 1:
        return math.inf
    first = comb(k + m_cutoff, m_cutoff + 1) ** 2 / 2.0 ** (m_cutoff + 1)
    # primes p >= 3 add at most (2/3)^(M+1) times as much again
    return 2 * first / (1 - ratio)


def _prime_tail_bound(k: int, P: int) -> float:
    # log L_p = -C(k,2)^2 / p^2 + O(k^6/p^3); twice the leading size covers p > P >= 4 k^2,
    # and sum_{p > P} p^{-2} < 1.3 / (P log P) for P >= 100.
    if k == 1:
        return 0.0
    if P < max(100, 4 * k * k):
        return math.inf
    return 2 * comb(k, 2) ** 2 * 1.3 / (P * math.log(P))


def log_local_factors(k: int, primes: np.ndarray, m_cutoff: int) -> np.ndarray:
    """k^2 log(1 - 1/p) + log sum_{m<=M} d_k(p^m)^2 p^{-m}, for each prime."""
    x = 1.0 / primes.astype(float)
    coeffs = [float(c) for c in local_series_coeffs(k, m_cutoff)]
    # Horner for S - 1 = x (c_1 + x (c_2 + ...)), keeping log1p accurate
    acc = np.zeros_like(x)
    for c in reversed(coeffs[1:]):
        acc = (acc + c) * x
    return k * k * np.log1p(-x) + np.log1p(acc)


def a_k(k: int, prime_cutoff: int = 1_000_000, m_cutoff: int = 60,
        tol: float | None = None) -> EulerProductValue:
    """Truncated Euler product prod_{p<=P} (1-1/p)^{k^2} sum_{m<=M} d_k(p^m)^2 p^{-m}.

    Raises ``ToleranceError`` when the certified relative bound exceeds ``tol``.
    """
    if k < 1:
        raise DomainError("k must be at least 1")
    if prime_cutoff < 100 or m_cutoff < 20:
        raise DomainError("need prime_cutoff >= 100 and m_cutoff >= 20")
    logs = log_local_factors(k, primes_up_to(prime_cutoff), m_cutoff)
    value = math.exp(math.fsum(logs))
    log_bound = _prime_tail_bound(k, prime_cutoff) + _m_truncation_bound(k, m_cutoff)
    bound = math.expm1(log_bound) if math.isfinite(log_bound) else math.inf
    if tol is not None and bound > tol:
        raise ToleranceError(
            f"a_{k}: tail bound {bound:.3g} exceeds tol {tol:.3g}; raise prime_cutoff or m_cutoff"
        )
    return EulerProductValue(value, bound, prime_cutoff, m_cutoff)


@lru_cache(maxsize=16)
def _a_k_default(k: int) -> float:
    return a_k(k).value


def conjectured_moment(k: int, T: float, a_value: float | None = None) -> float:
    """g_k a_k / (k^2)! T log^{k^2} T."""
    if k < 1 or T < 10:
        raise DomainError("need k >= 1 and T >= 10")
    a_value = _a_k_default(k) if a_value is None else a_value
    return float(g_k(k) / factorial(k * k)) * a_value * T * math.log(T) ** (k * k)


def dirichlet_poly_moment_prediction(k: int, T: float, a_value: float | None = None) -> float:
    """a_k / (k^2)! T log^{k^2} T, the mean square of sum_{n<T} d_k(n) n^{-1/2-it}."""
    if k < 1 or T < 10:
        raise DomainError("need k >= 1 and T >= 10")
    a_value = _a_k_default(k) if a_value is None else a_value
    return a_value / factorial(k * k) * T * math.log(T) ** (k * k)


def dk_polynomial(k: int, T: float) -> DirichletPolynomial:
    """sum_{n < T} d_k(n) n^{-1/2} n^{-s}, the length-T approximant to zeta^k."""
    N = int(math.ceil(T)) - 1
    d = sieve_dk(k, N).values.astype(float)
    return DirichletPolynomial(d / np.sqrt(np.arange(1, N + 1)))


def dirichlet_poly_moment(k: int, T: float, jobs: int = 1):
    """Exact int_0^T |sum_{n<T} d_k(n) n^{-1/2-it}|^2 dt."""
    return second_moment_exact(dk_polynomial(k, T), T, jobs=jobs)


# ------------------------------------------------------------ factorization

@dataclass(frozen=True)
class LocalFactorSeries:
    """Prime-independent local factor sum_j c(p^j) x^j, x = p^{-s}, truncated at x^{J-1}."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs or self.coeffs[0] != 1:
            raise DomainError("local factor series must start with c(1) = 1")
        if any(not isinstance(c, (int, np.integer)) for c in self.coeffs):
            raise DomainError("local factor coefficients must be integers")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def J(self) -> int:
        return len(self.coeffs)

    @classmethod
    def divisor_k(cls, k: int, J: int) -> "LocalFactorSeries":
        return cls(tuple(comb(k + j - 1, j) for j in range(J)))

    @classmethod
    def divisor_k_squared(cls, k: int, J: int) -> "LocalFactorSeries":
        return cls(tuple(comb(k + j - 1, j) ** 2 for j in range(J)))


def _generalized_binomial(n: int, i: int) -> int:
    num = 1
    for r in range(i):
        num *= n - r
    return num // factorial(i)


def _mul_power(series: list[int], j: int, exponent: int) -> list[int]:
    """series * (1 - x^j)^exponent mod x^len(series), exact for any integer exponent."""
    J = len(series)
    factor = [0] * J
    for i in range(J // j + 1):
        if i * j < J:
            factor[i * j] = (-1) ** i * _generalized_binomial(exponent, i)
    out = [0] * J
    for a, ca in enumerate(series):
        if ca:
            for b in range(0, J - a, j):
                if factor[b]:
                    out[a + b] += ca * factor[b]
    return out


@dataclass(frozen=True)
class ZetaFactorization:
    """f = remainder * prod_{j<J} (1 - x^j)^{-C(j)} through order J - 1."""

    C: tuple[int, ...]  # C(1), ..., C(J-1)
    remainder: tuple[int, ...]

    @property
    def J(self) -> int:
        return len(self.remainder)

    def reconstruct(self) -> tuple[int, ...]:
        series = list(self.remainder)
        for j, c in enumerate(self.C, start=1):
            if c:
                series = _mul_power(series, j, -c)
        return tuple(series)


def estermann_factorize(f: LocalFactorSeries) -> ZetaFactorization:
    """Peel off zeta(js)^{C(j)} factors from a local factor series.

    After clearing orders 1..j-1, the x^j coefficient is C(j) and multiplying
    by (1 - x^j)^{C(j)} clears it.
    """
    running = list(f.coeffs)
    C: list[int] = []
    for j in range(1, f.J):
        c = running[j]
        if not isinstance(c, int):
            raise ArithmeticError(f"non-integer peel coefficient at order {j}: {c!r}")
        C.append(c)
        if c:
            running = _mul_power(running, j, c)
        assert running[j] == 0
    return ZetaFactorization(tuple(C), tuple(running))


def pole_order_from_local(f: LocalFactorSeries) -> int:
    """Order of the pole at s = 1: the coefficient of p^{-s}."""
    if f.J < 2:
        raise DomainError("need the series through order 1")
    return f.coeffs[1]


# ------------------------------------------------------------------ export

def gk_rows(ks) -> list[dict]:
    rows = []
    for k in ks:
        g = g_k(k)
        rows.append({"k": k, "numerator": str(g.numerator), "denominator": str(g.denominator),
                     "integral": g.denominator == 1})
    return rows


def gk_rational_text(ks) -> str:
    """One line per k: ``k numerator/denominator``."""
    return "".join(f"{k} {g_k(k).numerator}/{g_k(k).denominator}\n" for k in ks)
