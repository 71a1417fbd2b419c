"""Reference evaluation of zeta, log-gamma, the chi factor and Laurent data.

Everything else in the package checks itself against the functions here, so
they avoid the approximate functional equation entirely:

* ``zeta_reference`` uses Euler-Maclaurin summation with ``ceil(|t|/2 + 30)``
  terms and 12 Bernoulli corrections.
* ``complex_log_gamma`` uses the Stirling series after shifting the argument
  away from the origin.
* ``laurent_at_pole`` extracts coefficients with the trapezoid rule on a circle.

Scalars in, scalars out; numpy arrays in, arrays out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import AccuracyDomainError, ContourError, DomainError, PoleError

# B_2, B_4, ..., B_24
BERNOULLI_EVEN = (
    1 / 6,
    -1 / 30,
    1 / 42,
    -1 / 30,
    5 / 66,
    -691 / 2730,
    7 / 6,
    -3617 / 510,
    43867 / 798,
    -174611 / 330,
    854513 / 138,
    -236364091 / 2730,
)

T_MAX = 1.0e6
SIGMA_MIN = -1.0
EM_ORDER = 12
_LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)
_WORK_ELEMENTS = 1 << 21


def _as_complex_array(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _unwrap(arr: np.ndarray, scalar: bool):
    return complex(arr.reshape(())) if scalar else arr


# ---------------------------------------------------------------- log gamma

def _stirling(z: np.ndarray) -> np.ndarray:
    out = (z - 0.5) * np.log(z) - z + _LOG_SQRT_2PI
    zinv = 1.0 / z
    z2inv = zinv * zinv
    power = zinv
    for k, b in enumerate(BERNOULLI_EVEN[:10], start=1):
        out = out + b / (2 * k * (2 * k - 1)) * power
        power = power * z2inv
    return out


def complex_log_gamma(z):
    """Principal branch of log Gamma(z).

    The branch is the analytic continuation from the positive real axis, so
    ``exp`` of the result is Gamma(z) and the imaginary part is continuous
    off the negative real axis.

    Raises
    ------
    PoleError
        If any ``z`` is a nonpositive integer.
    """
    z, scalar = _as_complex_array(z)
    if not np.all(np.isfinite(z)):
        raise DomainError("log-gamma argument must be finite")
    at_pole = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if np.any(at_pole):
        raise PoleError(f"Gamma has a pole at {z[at_pole].ravel()[0].real:g}")

    # Stirling needs |arg z| well away from pi; shift right by integer steps.
    need = np.where(np.abs(z.imag) < 10.0, 10.0 - z.real, -z.real)
    shift = np.maximum(np.ceil(need), 0).astype(np.int64)
    correction = np.zeros_like(z)
    for k in range(int(shift.max(initial=0))):
        active = k < shift
        correction = correction - np.where(active, np.log(np.where(active, z + k, 1.0)), 0.0)
    out = _stirling(z + shift) + correction
    return _unwrap(out, scalar)


def riemann_siegel_theta(t):
    """theta(t) = arg Gamma(1/4 + it/2) - (t/2) log pi, continuous in t."""
    t_arr = np.asarray(t, dtype=float)
    theta = np.imag(complex_log_gamma(0.25 + 0.5j * t_arr)) - 0.5 * t_arr * math.log(math.pi)
    return float(theta) if t_arr.ndim == 0 else theta


def hardy_z(t):
    """Z(t) = exp(i theta(t)) zeta(1/2 + it); real for real t."""
    t_arr = np.asarray(t, dtype=float)
    z = np.exp(1j * np.asarray(riemann_siegel_theta(t_arr))) * np.asarray(zeta_reference(0.5 + 1j * t_arr))
    return float(z.real) if t_arr.ndim == 0 else z.real


# --------------------------------------------------------------------- zeta

def em_cutoff(t: float) -> int:
    return int(math.ceil(abs(t) / 2.0 + 30.0))


def _power_sum(s: np.ndarray, logn: np.ndarray) -> np.ndarray:
    """sum_n n^{-s_i} for each row, given log n.

    Real cos/sin with a matrix-vector product is about twice as fast as a
    complex exponential of the full outer product.
    """
    phase = np.multiply.outer(s.imag, logn)
    sigma = s.real
    if sigma.size and np.all(sigma == sigma[0]):
        weight = np.exp(-sigma[0] * logn)
        return np.cos(phase) @ weight - 1j * (np.sin(phase) @ weight)
    weight = np.exp(-np.multiply.outer(sigma, logn))
    return (np.cos(phase) * weight).sum(axis=1) - 1j * (np.sin(phase) * weight).sum(axis=1)


def _zeta_block(s: np.ndarray, n_terms: int, order: int) -> np.ndarray:
    """Euler-Maclaurin with a common cutoff ``n_terms`` for every entry of ``s``."""
    N = float(n_terms)
    logn = np.log(np.arange(1, n_terms, dtype=float))
    head = _power_sum(s, logn)
    logN = math.log(N)
    N_pow = np.exp(-s * logN)  # N^{-s}
    out = head + N * N_pow / (s - 1.0) + 0.5 * N_pow
    # B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    rising = s.copy()
    power = N_pow / N
    fact = 2.0
    for k in range(1, order + 1):
        out = out + BERNOULLI_EVEN[k - 1] / fact * rising * power
        rising = rising * (s + 2 * k - 1) * (s + 2 * k)
        power = power / (N * N)
        fact *= (2 * k + 1) * (2 * k + 2)
    return out


def zeta_reference(s, *, cutoff: int | None = None, order: int = EM_ORDER):
    """Riemann zeta by Euler-Maclaurin summation.

    Parameters
    ----------
    s : complex or array_like
        Points with ``s != 1``, ``Re s >= -1`` and ``|Im s| <= 1e6``.
    cutoff : int, optional
        Number of terms summed directly; default ``ceil(|t|/2 + 30)``.
        Larger values only improve accuracy.
    order : int
        Number of Bernoulli correction terms, at most 12.
    """
    s, scalar = _as_complex_array(s)
    if not np.all(np.isfinite(s)):
        raise DomainError("zeta argument must be finite")
    if np.any(s == 1.0):
        raise PoleError("zeta has a pole at s = 1")
    if np.any(np.abs(s.imag) > T_MAX) or np.any(s.real < SIGMA_MIN):
        raise AccuracyDomainError(
            f"zeta_reference is validated for Re s >= {SIGMA_MIN} and |Im s| <= {T_MAX:g}"
        )
    if not 1 <= order <= len(BERNOULLI_EVEN):
        raise ValueError(f"order must be in 1..{len(BERNOULLI_EVEN)}")

    flat = s.ravel()
    out = np.empty_like(flat)
    if cutoff is not None:
        cuts = np.full(flat.shape, max(int(cutoff), 2), dtype=np.int64)
    else:
        cuts = np.ceil(np.abs(flat.imag) / 2.0 + 30.0).astype(np.int64)
    # Round cutoffs up to a coarse grid so nearby points share one matrix.
    grid = np.where(cuts <= 64, cuts, (cuts + 63) // 64 * 64)
    for n_terms in np.unique(grid):
        idx = np.nonzero(grid == n_terms)[0]
        rows = max(1, _WORK_ELEMENTS // int(n_terms))
        for start in range(0, idx.size, rows):
            part = idx[start:start + rows]
            out[part] = _zeta_block(flat[part], int(n_terms), order)
    return _unwrap(out.reshape(s.shape), scalar)


def zeta_truncated_sum(s, T: float):
    """sum_{n <= T} n^{-s} - T^{1-s}/(1-s), returned without error control."""
    s_arr, scalar = _as_complex_array(s)
    if T < 2:
        raise DomainError("T must be at least 2")
    if np.any(s_arr.real <= 0):
        raise DomainError("truncated sum requires Re s > 0")
    if np.any(np.abs(s_arr.imag) > T):
        raise DomainError("truncated sum requires |t| <= T")
    if np.any(s_arr == 1.0):
        raise PoleError("s = 1 is excluded")
    n_max = int(math.floor(T))
    logn = np.log(np.arange(1, n_max + 1, dtype=float))
    flat = s_arr.ravel()
    out = np.empty_like(flat)
    rows = max(1, _WORK_ELEMENTS // n_max)
    for start in range(0, flat.size, rows):
        part = flat[start:start + rows]
        out[start:start + rows] = _power_sum(part, logn)
    out = out - np.exp((1.0 - flat) * math.log(T)) / (1.0 - flat)
    return _unwrap(out.reshape(s_arr.shape), scalar)


# ---------------------------------------------------------------------- chi

def _log_sin(w: np.ndarray) -> np.ndarray:
    # log sin(w) up to multiples of 2*pi*i, without overflow for large |Im w|.
    upper = w.imag >= 0
    lo = -1j * w + np.log1p(-np.exp(2j * w)) + np.log(0.5j)
    hi = 1j * w + np.log1p(-np.exp(-2j * w)) + np.log(-0.5j)
    return np.where(upper, lo, hi)


def log_chi(s):
    """log of chi(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s), modulo 2 pi i."""
    s, scalar = _as_complex_array(s)
    if np.any(np.abs(s.imag) > T_MAX):
        raise AccuracyDomainError(f"chi is evaluated only for |t| <= {T_MAX:g}")
    positive_int = (s.imag == 0) & (s.real >= 1) & (s.real == np.round(s.real))
    if np.any(positive_int):
        raise PoleError("chi_exact excludes positive integers (Gamma(1-s) pole)")
    with np.errstate(all="ignore"):
        safe = np.where(positive_int, 0.5, s)
        out = (
            safe * math.log(2.0)
            + (safe - 1.0) * math.log(math.pi)
            + _log_sin(0.5 * math.pi * safe)
            + np.asarray(complex_log_gamma(1.0 - safe))
        )
    return _unwrap(out, scalar)


def chi_exact(s):
    """The factor chi(s) in zeta(s) = chi(s) zeta(1 - s)."""
    s_arr, scalar = _as_complex_array(s)
    with np.errstate(over="raise", invalid="ignore"):
        try:
            out = np.exp(np.asarray(log_chi(s_arr)))
        except FloatingPointError as exc:
            raise AccuracyDomainError("chi(s) overflows double precision") from exc
    if not np.all(np.isfinite(out)):
        raise AccuracyDomainError("chi(s) is not finite in double precision")
    return _unwrap(out, scalar)


def chi_asymptotic(s):
    """(t/2pi)^(1/2-s) e^{i t + i pi/4}; relative error O(1/t) for t >= 5."""
    s_arr, scalar = _as_complex_array(s)
    t = s_arr.imag
    if np.any(t < 5):
        raise DomainError("chi_asymptotic needs t >= 5")
    out = np.exp((0.5 - s_arr) * np.log(t / (2 * math.pi)) + 1j * (t + 0.25 * math.pi))
    return _unwrap(out, scalar)


# ------------------------------------------------------------------ Laurent

@dataclass(frozen=True)
class LaurentExpansion:
    """Truncated Laurent series sum_{j=-order}^{K} c_j (s - center)^j."""

    center: complex
    order: int
    coeffs: tuple[complex, ...]

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("pole order must be nonnegative")
        if len(self.coeffs) < self.order + 1:
            raise ValueError("need at least c_{-order}..c_0")

    @property
    def K(self) -> int:
        return len(self.coeffs) - self.order - 1

    def coeff(self, j: int) -> complex:
        if j < -self.order:
            return 0j
        if j > self.K:
            raise IndexError(f"c_{j} not stored (K = {self.K})")
        return self.coeffs[j + self.order]

    @property
    def residue(self) -> complex:
        return self.coeff(-1)

    def __call__(self, s):
        s_arr = np.asarray(s, dtype=complex)
        h = s_arr - self.center
        acc = np.zeros_like(h)
        # Horner on the regular part, then the principal part.
        for c in reversed(self.coeffs[self.order:]):
            acc = acc * h + c
        hinv = 1.0 / h if self.order else None
        principal = np.zeros_like(h)
        for c in self.coeffs[: self.order]:
            principal = principal * hinv + c
        if self.order:
            acc = acc + principal * hinv
        return complex(acc) if s_arr.ndim == 0 else acc


def _callable(F) -> Callable:
    return getattr(F, "evaluate", F)


def laurent_at_pole(F, s0: complex, order: int, radius: float = 0.25, K: int = 8,
                    nodes: int = 512) -> LaurentExpansion:
    """Laurent coefficients c_{-order}..c_K of F at s0 from Cauchy integrals.

    ``F`` is a vectorized callable (or any object with an ``evaluate``
    method).  The circle |s - s0| = radius must avoid every other
    singularity; the trapezoid rule then converges geometrically.
    """
    if order < 0 or K < -order:
        raise ValueError("need order >= 0 and K >= -order")
    if radius <= 0:
        raise ValueError("radius must be positive")
    if nodes < 2 * (order + K + 1):
        raise ValueError("too few quadrature nodes for the requested coefficients")
    theta = 2 * math.pi * np.arange(nodes) / nodes
    h = radius * np.exp(1j * theta)
    values = np.asarray(_callable(F)(s0 + h), dtype=complex)
    if values.shape != h.shape or not np.all(np.isfinite(values)):
        raise ContourError(f"F is not finite on the circle |s - {s0}| = {radius}")
    # c_j r^j = (1/M) sum_m f_m e^{-i j theta_m}; negative j wrap around.
    spectrum = np.fft.fft(values) / nodes
    js = np.arange(-order, K + 1)
    coeffs = spectrum[js % nodes] / radius ** js.astype(float)
    return LaurentExpansion(complex(s0), order, tuple(complex(c) for c in coeffs))


def _gamma_from_laurent() -> float:
    exp = laurent_at_pole(zeta_reference, 1.0, 1, radius=0.25, K=2)
    return exp.coeff(0).real


EULER_GAMMA = _gamma_from_laurent()
