"""Dirichlet polynomials, their exact mean squares, and the approximate
functional equations for zeta and zeta^2 on the half line."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .arith import sieve_dk
from .errors import DomainError
from .special import chi_exact

AFE_T_MIN = 50.0
_BLOCK_ELEMENTS = 1 << 20


@dataclass(frozen=True)
class DirichletPolynomial:
    """P(s) = sum_{n=1}^{N} a_n n^{-s}; ``coeffs[0]`` is a_1."""

    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.asarray(self.coeffs, dtype=complex)
        if a.ndim != 1 or a.size < 1:
            raise ValueError("need at least one coefficient")
        if not np.all(np.isfinite(a)):
            raise ValueError("coefficients must be finite")
        a.flags.writeable = False
        object.__setattr__(self, "coeffs", a)

    @property
    def N(self) -> int:
        return int(self.coeffs.size)

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], N: int) -> "DirichletPolynomial":
        n = np.arange(1, N + 1, dtype=float)
        return cls(np.asarray(func(n), dtype=complex))

    def __call__(self, s):
        return poly_eval(self, s)


@dataclass(frozen=True)
class SecondMomentBreakdown:
    main: float
    cross: float
    total: float
    T: float
    N: int


def poly_eval(P: DirichletPolynomial, s):
    s_arr = np.asarray(s, dtype=complex)
    logn = np.log(np.arange(1, P.N + 1, dtype=float))
    flat = s_arr.ravel()
    out = np.empty_like(flat)
    rows = max(1, _BLOCK_ELEMENTS // P.N)
    for start in range(0, flat.size, rows):
        part = flat[start:start + rows]
        out[start:start + rows] = np.exp(np.multiply.outer(-part, logn)) @ P.coeffs
    out = out.reshape(s_arr.shape)
    return complex(out) if s_arr.ndim == 0 else out


def mean_value_kernel(lam: np.ndarray, T: float) -> np.ndarray:
    """int_0^T e^{i lam t} dt = T e^{i theta/2} sin(theta/2)/(theta/2), theta = lam T.

    The half-angle form has no cancellation as theta -> 0.
    """
    theta = lam * T
    return T * np.exp(0.5j * theta) * np.sinc(theta / (2 * math.pi))


def _cross_rows(a: np.ndarray, logn: np.ndarray, T: float, lo: int, hi: int) -> float:
    # 2 Re sum_{lo <= n < hi, m > n} a_n conj(a_m) K(log m - log n)
    cols = slice(lo + 1, a.size)
    lam = logn[None, cols] - logn[lo:hi, None]
    n_idx = np.arange(lo, hi)[:, None]
    m_idx = np.arange(lo + 1, a.size)[None, :]
    weight = a[lo:hi, None] * np.conj(a[None, cols])
    terms = np.where(m_idx > n_idx, weight * mean_value_kernel(lam, T), 0.0)
    return 2.0 * float(np.sum(terms.real))


def second_moment_exact(P: DirichletPolynomial, T: float, jobs: int = 1) -> SecondMomentBreakdown:
    """int_0^T |P(it)|^2 dt in closed form, split into diagonal and cross terms.

    The double sum is cut into fixed row blocks that depend only on ``N``;
    block sums are combined in block order, so the result does not depend
    on ``jobs``.
    """
    if not T > 0:
        raise DomainError("T must be positive")
    a = P.coeffs
    N = P.N
    main = T * math.fsum(np.abs(a) ** 2)
    if N == 1:
        return SecondMomentBreakdown(main, 0.0, main, T, N)
    logn = np.log(np.arange(1, N + 1, dtype=float))
    rows = max(1, _BLOCK_ELEMENTS // N)
    bounds = [(lo, min(lo + rows, N - 1)) for lo in range(0, N - 1, rows)]
    work = lambda b: _cross_rows(a, logn, T, *b)  # noqa: E731
    if jobs > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(work, bounds))
    else:
        parts = [work(b) for b in bounds]
    cross = math.fsum(parts)
    return SecondMomentBreakdown(main, cross, main + cross, T, N)


def mv_envelope(P: DirichletPolynomial) -> float:
    """sum n |a_n|^2, the scale of the off-diagonal term in the mean value theorem."""
    n = np.arange(1, P.N + 1, dtype=float)
    return math.fsum(n * np.abs(P.coeffs) ** 2)


# ------------------------------------------------------------------- AFEs

def _check_half_line(s: np.ndarray) -> None:
    if np.any(np.abs(s.real - 0.5) > 1e-12):
        raise DomainError("approximate functional equation is implemented on Re s = 1/2 only")
    if np.any(np.abs(s.imag) < AFE_T_MIN):
        raise DomainError(f"approximate functional equation needs |t| >= {AFE_T_MIN:g}")


def _masked_sums(s: np.ndarray, lengths: np.ndarray, weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """For each s_i: sum_{n<=L_i} w_n n^{-s_i} and sum_{n<=L_i} w_n n^{-(1-s_i)}."""
    first = np.empty_like(s)
    second = np.empty_like(s)
    order = np.argsort(lengths, kind="stable")
    start = 0
    while start < s.size:
        n_max = int(lengths[order[min(start + 63, s.size - 1)]])
        rows = max(1, min(64, _BLOCK_ELEMENTS // max(n_max, 1)))
        idx = order[start:start + rows]
        n_max = int(lengths[idx].max())
        n = np.arange(1, n_max + 1)
        logn = np.log(n.astype(float))
        mask = (n[None, :] <= lengths[idx, None]) * weights[None, :n_max]
        first[idx] = np.sum(mask * np.exp(np.multiply.outer(-s[idx], logn)), axis=1)
        second[idx] = np.sum(mask * np.exp(np.multiply.outer(s[idx] - 1.0, logn)), axis=1)
        start += rows
    return first, second


def afe_length(t: float) -> int:
    return int(math.floor(math.sqrt(abs(t) / (2 * math.pi))))


def zeta_afe(s):
    """sum_{n<=N} n^{-s} + chi(s) sum_{n<=N} n^{s-1} with N = floor(sqrt(|t|/2pi))."""
    s_arr = np.asarray(s, dtype=complex)
    _check_half_line(s_arr)
    flat = s_arr.ravel()
    lengths = np.floor(np.sqrt(np.abs(flat.imag) / (2 * math.pi))).astype(np.int64)
    first, second = _masked_sums(flat, lengths, np.ones(int(lengths.max()), dtype=float))
    out = (first + np.asarray(chi_exact(flat)) * second).reshape(s_arr.shape)
    return complex(out) if s_arr.ndim == 0 else out


@lru_cache(maxsize=4)
def _divisor_weights(N: int) -> np.ndarray:
    w = sieve_dk(2, N).values.astype(float)
    w.flags.writeable = False
    return w


def _divisor_table(n_max: int) -> np.ndarray:
    size = 1 << max(10, (n_max - 1).bit_length())
    return _divisor_weights(size)


def zeta_squared_afe(s):
    """sum_{n<=x} d(n) n^{-s} + chi(s)^2 sum_{n<=x} d(n) n^{s-1}, x = floor(|t|/2pi)."""
    s_arr = np.asarray(s, dtype=complex)
    _check_half_line(s_arr)
    flat = s_arr.ravel()
    lengths = np.floor(np.abs(flat.imag) / (2 * math.pi)).astype(np.int64)
    weights = _divisor_table(int(lengths.max()))
    first, second = _masked_sums(flat, lengths, weights)
    chi = np.asarray(chi_exact(flat))
    out = (first + chi * chi * second).reshape(s_arr.shape)
    return complex(out) if s_arr.ndim == 0 else out
