"""Perron's formula: the basic kernel, truncated line integrals for partial
sums, main terms from residues, and a catalog of Dirichlet series."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .arith import ArithTable, sieve_dk, sieve_phi
from .errors import DomainError, PoleError
from .moments import QuadratureConfig, integrate_vertical
from .special import laurent_at_pole, zeta_reference

Pole = tuple[complex, int]


def zeta_growth_exponent(sigma: float) -> float:
    """Convexity exponent mu with zeta(sigma + it) << |t|^mu."""
    if sigma > 1:
        return 0.0
    if sigma >= 0:
        return 0.5 - 0.5 * sigma
    return 0.5 - sigma


@dataclass(frozen=True)
class DirichletSeriesSpec:
    """F(s) = sum a_n n^{-s} with its analytic metadata.

    ``factors`` lists ``(power, scale, shift)`` triples meaning
    ``zeta(scale*s + shift)**power``; F is their product.  It drives both
    evaluation and the growth estimate.  ``poles`` is exhaustive in
    ``Re s > sigma1``.
    """

    name: str
    evaluate: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    abscissa: float
    poles: tuple[Pole, ...]
    sigma1: float
    coefficients: Callable[[int], np.ndarray] | None = field(default=None, repr=False)
    factors: tuple[tuple[int, float, float], ...] = ()
    nonnegative: bool = True

    @property
    def growth_hint(self) -> dict[str, object]:
        return {"factors": self.factors, "sigma1": self.sigma1}

    def growth_exponent(self, sigma: float) -> float:
        """Exponent mu with F(sigma + it) << |t|^mu, from convexity.

        Factors in the denominator are bounded only where their argument has
        real part > 1; elsewhere the exponent is ``inf``.
        """
        mu = 0.0
        for power, scale, shift in self.factors:
            arg = scale * sigma + shift
            if power > 0:
                mu += power * zeta_growth_exponent(arg)
            elif arg <= 1:
                return math.inf
        return mu

    def __call__(self, s):
        return self.evaluate(s)


def _product_of_zetas(factors):
    def evaluate(s):
        s_arr = np.asarray(s, dtype=complex)
        out = np.ones_like(s_arr)
        for power, scale, shift in factors:
            out = out * np.asarray(zeta_reference(scale * s_arr + shift)) ** power
        return complex(out) if s_arr.ndim == 0 else out
    return evaluate


def _dk_coeffs(k):
    return lambda N: sieve_dk(k, N).values.astype(float)


def _d2_over_n(N):
    d = sieve_dk(2, N).values.astype(float)
    return d * d / np.arange(1, N + 1)


def _d2(N):
    d = sieve_dk(2, N).values.astype(float)
    return d * d


_CATALOG_HELP = "zeta, one, dk_pow(k), d2, d2_over_n, phi, inv_power(A)"


def series_catalog(name: str) -> DirichletSeriesSpec:
    """Look up a Dirichlet series by name (see ``_CATALOG_HELP``)."""
    name = name.strip()
    m = re.fullmatch(r"(\w+)(?:\((.*)\))?", name)
    if not m:
        raise DomainError(f"unknown series {name!r}; known: {_CATALOG_HELP}")
    base, arg = m.group(1), m.group(2)
    if base == "zeta" and arg is None:
        f = ((1, 1.0, 0.0),)
        return DirichletSeriesSpec(name, _product_of_zetas(f), 1.0, ((1.0, 1),), -math.inf,
                                   lambda N: np.ones(N), f)
    if base == "one" and arg is None:
        ev = lambda s: np.ones_like(np.asarray(s, dtype=complex))[()]  # noqa: E731
        coeffs = lambda N: np.eye(1, N).ravel()  # noqa: E731
        return DirichletSeriesSpec(name, ev, -math.inf, (), -math.inf, coeffs, ())
    if base == "dk_pow" and arg is not None:
        k = int(arg)
        if k < 1:
            raise DomainError("dk_pow needs k >= 1")
        f = ((k, 1.0, 0.0),)
        return DirichletSeriesSpec(name, _product_of_zetas(f), 1.0, ((1.0, k),), -math.inf,
                                   _dk_coeffs(k), f)
    if base == "d2" and arg is None:
        f = ((4, 1.0, 0.0), (-1, 2.0, 0.0))
        return DirichletSeriesSpec(name, _product_of_zetas(f), 1.0, ((1.0, 4),), 0.75, _d2, f)
    if base == "d2_over_n" and arg is None:
        # nontrivial zeros of zeta(2s+2) sit at -1 < Re s < -1/2, left of sigma1
        f = ((4, 1.0, 1.0), (-1, 2.0, 2.0))
        return DirichletSeriesSpec(name, _product_of_zetas(f), 0.0, ((0.0, 4),), -0.25,
                                   _d2_over_n, f)
    if base == "phi" and arg is None:
        f = ((1, 1.0, -1.0), (-1, 1.0, 0.0))
        return DirichletSeriesSpec(name, _product_of_zetas(f), 2.0, ((2.0, 1),), 1.0,
                                   lambda N: sieve_phi(N).values.astype(float), f)
    if base == "inv_power" and arg is not None:
        A = float(arg)
        f = ((1, 1.0, A),)
        return DirichletSeriesSpec(name, _product_of_zetas(f), 1.0 - A, ((1.0 - A, 1),), -math.inf,
                                   lambda N: np.arange(1, N + 1, dtype=float) ** -A, f)
    raise DomainError(f"unknown series {name!r}; known: {_CATALOG_HELP}")


# ------------------------------------------------------------------ kernels

def perron_kernel(A: float, Y: float, N: int, cfg: QuadratureConfig | None = None) -> complex:
    """(1/2 pi i) int_{1-iY}^{1+iY} A^s s^{-N} ds by quadrature in y."""
    if not A > 0 or A == 1:
        raise DomainError("need A > 0 and A != 1")
    if N < 1 or not Y > 0:
        raise DomainError("need N >= 1 and Y > 0")
    logA = math.log(A)

    def integrand(y):
        s = 1.0 + 1j * y
        return np.exp(s * logA) / s**N / (2 * math.pi)

    cfg = cfg or QuadratureConfig(abs_tol=1e-9)
    return integrate_vertical(integrand, -Y, Y, cfg, rate=_perron_rate(A)).value


def perron_kernel_limit(A: float, N: int) -> float:
    """Y -> infinity value: log^{N-1}(A)/(N-1)! for A > 1, else 0."""
    return math.log(A) ** (N - 1) / math.factorial(N - 1) if A > 1 else 0.0


def _perron_rate(X: float) -> float:
    # X^{iy} oscillates at rate log X; the adaptive rule refines wherever F adds more
    return abs(math.log(X)) + 2.0


def perron_truncation_bound(F: DirichletSeriesSpec, X: float, sigma: float, Y: float) -> float:
    """Bound on |truncated Perron integral - S(X)|.

    Uses |(1/2pi i) int_{c-iY}^{c+iY} y^s ds/s - [y > 1]| <= y^c min(1, 1/(pi Y |log y|))
    termwise for n <= 2X and the value F(sigma) for the rest (nonnegative
    coefficients only).
    """
    if F.coefficients is None or not F.nonnegative:
        return math.inf
    n_max = max(1, int(2 * X))
    a = np.abs(F.coefficients(n_max))
    n = np.arange(1, n_max + 1, dtype=float)
    y = X / n
    logy = np.abs(np.log(y))
    head = float(np.sum(a * y**sigma * np.minimum(1.0, 1.0 / (math.pi * Y * logy))))
    tail_sum = max(float(np.real(F.evaluate(sigma))) - float(np.sum(a * n**-sigma)), 0.0)
    return head + X**sigma * tail_sum / (math.pi * Y * math.log(2.0))


def _check_line(F: DirichletSeriesSpec, sigma: float) -> None:
    if not sigma > F.abscissa:
        raise DomainError(f"sigma = {sigma} is not right of the abscissa {F.abscissa}")
    for loc, _ in F.poles:
        if abs(complex(loc).real - sigma) < 1e-12:
            raise PoleError(f"line Re s = {sigma} passes through the pole at {loc}")


def perron_sum_estimate(F: DirichletSeriesSpec, X: float, sigma: float, Y: float,
                        cfg: QuadratureConfig | None = None) -> complex:
    """(1/2 pi i) int_{sigma-iY}^{sigma+iY} F(s) X^s ds/s, approximating sum_{n<=X} a_n."""
    _check_line(F, sigma)
    if X == math.floor(X):
        raise DomainError("X must not be an integer; use a half-integer such as n + 0.5")
    if not X > 0 or not Y > 0:
        raise DomainError("need X > 0 and Y > 0")
    logX = math.log(X)

    def integrand(y):
        s = sigma + 1j * y
        return np.asarray(F.evaluate(s)) * np.exp(s * logX) / s / (2 * math.pi)

    cfg = cfg or QuadratureConfig(abs_tol=1e-6)
    rate = _perron_rate(X)
    if F.nonnegative:
        # real coefficients: the integrand at -y is the conjugate of the one at y
        half = integrate_vertical(integrand, 0.0, Y, cfg, rate).value
        return complex(2.0 * half.real, 0.0)
    return integrate_vertical(integrand, -Y, Y, cfg, rate).value


@dataclass(frozen=True)
class PerronEstimate:
    value: complex
    Y: float
    error_bound: float


def perron_estimate(F: DirichletSeriesSpec, X: float, sigma: float, tol: float,
                    Y_start: float = 100.0, Y_max: float = 2.0e4) -> PerronEstimate:
    """Pick Y by doubling until the truncation bound is below ``tol``.

    If ``Y_max`` is reached first the estimate at ``Y_max`` is returned with
    the bound actually achieved.
    """
    Y = Y_start
    bound = perron_truncation_bound(F, X, sigma, Y)
    while bound > tol and Y < Y_max:
        Y = min(2 * Y, Y_max)
        bound = perron_truncation_bound(F, X, sigma, Y)
    return PerronEstimate(perron_sum_estimate(F, X, sigma, Y), Y, bound)


# --------------------------------------------------------------- main terms

@dataclass(frozen=True)
class MainTermPolynomial:
    """X^x_power * sum_j coeffs[j] (log X)^j."""

    x_power: float
    coeffs: tuple[float, ...]
    source_pole: Pole

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> float:
        return self.coeffs[-1]

    def __call__(self, X):
        X = np.asarray(X, dtype=float)
        L = np.log(X)
        acc = np.zeros_like(L)
        for c in reversed(self.coeffs):
            acc = acc * L + c
        out = X**self.x_power * acc
        return float(out) if out.ndim == 0 else out


def main_term_from_pole(F: DirichletSeriesSpec, pole: Pole, radius: float = 0.25,
                        nodes: int = 512) -> MainTermPolynomial:
    """Residue of F(s) X^s / s at ``pole`` as a polynomial in log X.

    With c_j the Laurent coefficients of F(s)/s at s0 (pole order r, which
    is one higher when s0 = 0), the residue is
    X^{s0} * sum_{j<r} c_{-1-j} (log X)^j / j!.
    """
    s0, order = complex(pole[0]), int(pole[1])
    if not any(abs(complex(p[0]) - s0) < 1e-12 and p[1] == order for p in F.poles):
        raise DomainError(f"pole {pole} is not declared for {F.name}")
    total_order = order + (1 if s0 == 0 else 0)

    def integrand(s):
        return np.asarray(F.evaluate(s)) / s

    exp = laurent_at_pole(integrand, s0, total_order, radius=radius, K=0, nodes=nodes)
    coeffs = []
    for j in range(total_order):
        c = exp.coeff(-1 - j) / math.factorial(j)
        coeffs.append(c.real if abs(c.imag) <= 1e-12 * max(1.0, abs(c)) else c)
    return MainTermPolynomial(s0.real, tuple(coeffs), (s0, order))


def full_main_term(F: DirichletSeriesSpec, radius: float = 0.25) -> list[MainTermPolynomial]:
    """Main-term polynomials from every declared pole, plus the s = 0 residue
    F(0) when F is regular there and 0 lies in the declared region."""
    polys = [main_term_from_pole(F, p, radius=radius) for p in F.poles]
    if F.sigma1 < 0 and not any(abs(complex(p[0])) < 1e-12 for p in F.poles):
        value = complex(F.evaluate(0.0))
        polys.append(MainTermPolynomial(0.0, (value.real,), (0j, 0)))
    return polys


def _evaluate_terms(P, X):
    terms = [P] if isinstance(P, MainTermPolynomial) else list(P)
    return sum(t(X) for t in terms)


def compare_sum_asymptotic(table: ArithTable, weight: str,
                           P: MainTermPolynomial | Sequence[MainTermPolynomial],
                           X_grid: Sequence[float]) -> list[dict]:
    """Rows (X, S(X), main term, relative residual) for S(X) = sum_{n<=X} w_n a_n."""
    if weight not in ("1", "1/n"):
        raise DomainError("weight must be '1' or '1/n'")
    for X in X_grid:
        if not 2 <= X <= table.N:
            raise DomainError(f"X = {X} outside [2, {table.N}]")
    if weight == "1":
        sums = table.partial_sums()
    else:
        sums = np.cumsum(table.values.astype(float) / np.arange(1, table.N + 1))
    rows = []
    for X in X_grid:
        S = sums[int(math.floor(X)) - 1]
        S = int(S) if weight == "1" else float(S)
        predicted = float(_evaluate_terms(P, X))
        rows.append({"X": X, "S": S, "main": predicted, "rel_residual": (S - predicted) / S})
    return rows


def partial_sum_inverse_power(T: float, A: float) -> tuple[float, float]:
    """(sum_{n<=T} n^{-A}, zeta(A) - T^{1-A}/(A-1))."""
    if not A > 1:
        raise DomainError("need A > 1")
    if T < 2:
        raise DomainError("need T >= 2")
    n = np.arange(1, int(math.floor(T)) + 1, dtype=float)
    total = math.fsum(n**-A)
    predicted = zeta_reference(A).real - T ** (1 - A) / (A - 1)
    return total, predicted


def square_table(table: ArithTable) -> ArithTable:
    return ArithTable(f"{table.label}^2", table.values * table.values, table.multiplicative)


__all__ = [
    "DirichletSeriesSpec", "MainTermPolynomial", "PerronEstimate", "compare_sum_asymptotic",
    "full_main_term", "main_term_from_pole", "partial_sum_inverse_power", "perron_estimate",
    "perron_kernel", "perron_kernel_limit", "perron_sum_estimate", "perron_truncation_bound",
    "series_catalog", "square_table", "zeta_growth_exponent",
]
