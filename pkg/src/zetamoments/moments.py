"""Moment integrals of zeta on vertical lines and their predicted main terms."""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import asdict, dataclass
from typing import Callable, Iterable

import numpy as np

from .dirichlet import AFE_T_MIN, zeta_afe, zeta_squared_afe
from .errors import BudgetExceededError, DomainError
from .special import EULER_GAMMA, zeta_reference

RULES = ("gauss-legendre-panels", "adaptive-simpson")
EVALUATORS = ("reference", "afe", "afe-squared")

# 15-point Kronrod extension of the 7-point Gauss-Legendre rule on [-1, 1].
_GK_X = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_GK_W = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_G7_W = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
GK_NODES = np.concatenate([-_GK_X[:-1], _GK_X[::-1]])
GK_WEIGHTS = np.concatenate([_GK_W[:-1], _GK_W[::-1]])
G7_WEIGHTS = np.zeros(15)
G7_WEIGHTS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_G7_W, _G7_W[-2::-1]])


@dataclass(frozen=True)
class QuadratureConfig:
    rule: str = "gauss-legendre-panels"
    panel_width: float | None = None  # default pi / (2 log T1)
    abs_tol: float = 1e-6
    max_evals: int = 5_000_000

    def __post_init__(self):
        if self.rule not in RULES:
            raise DomainError(f"unknown quadrature rule {self.rule!r}")
        if self.panel_width is not None and not self.panel_width > 0:
            raise DomainError("panel_width must be positive")
        if not self.abs_tol > 0 or self.max_evals < 15:
            raise DomainError("abs_tol must be positive and max_evals >= 15")

    def width_for(self, T_max: float, rate: float | None = None) -> float:
        """Panel width for an integrand oscillating at ``rate`` radians per unit t
        (default log T_max, the scale of |zeta(1/2+it)|^2)."""
        scale = rate if rate is not None else math.log(max(T_max, 10.0))
        width = self.panel_width if self.panel_width is not None else math.pi / (2 * scale)
        if width > math.pi / scale:
            raise DomainError(
                f"panel_width {width:g} does not resolve oscillation rate {scale:g}; "
                f"need <= {math.pi / scale:g}"
            )
        return width


@dataclass(frozen=True)
class QuadResult:
    value: complex
    abs_error: float
    evals: int


def _panels(T0: float, T1: float, width: float) -> np.ndarray:
    count = max(1, int(math.ceil((T1 - T0) / width)))
    edges = np.linspace(T0, T1, count + 1)
    return np.stack([edges[:-1], edges[1:]], axis=1)


def _fsum_complex(values: Iterable[complex]) -> complex:
    vals = list(values)
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))


def _gauss_kronrod(func, T0, T1, width, cfg) -> QuadResult:
    pending = _panels(T0, T1, width)
    length = T1 - T0
    accepted: list[tuple[float, complex]] = []
    err_total = 0.0
    evals = 0
    while pending.size:
        if evals + 15 * len(pending) > cfg.max_evals:
            raise BudgetExceededError(
                f"max_evals = {cfg.max_evals} reached with {len(pending)} panels unresolved"
            )
        a, b = pending[:, :1], pending[:, 1:]
        half = 0.5 * (b - a)
        nodes = (a + b) * 0.5 + half * GK_NODES[None, :]
        vals = np.asarray(func(nodes.ravel()), dtype=complex).reshape(nodes.shape)
        evals += nodes.size
        kron = (vals @ GK_WEIGHTS) * half[:, 0]
        gauss = (vals @ G7_WEIGHTS) * half[:, 0]
        err = np.abs(kron - gauss)
        budget = cfg.abs_tol * (2 * half[:, 0]) / length
        ok = (err <= budget) | (half[:, 0] < 1e-9 * max(1.0, abs(T1)))
        for lo, v, e in zip(pending[ok, 0], kron[ok], err[ok]):
            accepted.append((float(lo), complex(v)))
            err_total += float(e)
        bad = pending[~ok]
        mid = bad.mean(axis=1)
        pending = np.concatenate([
            np.stack([bad[:, 0], mid], axis=1),
            np.stack([mid, bad[:, 1]], axis=1),
        ]) if bad.size else np.zeros((0, 2))
    accepted.sort(key=lambda item: item[0])
    return QuadResult(_fsum_complex(v for _, v in accepted), err_total, evals)


def _adaptive_simpson(func, T0, T1, width, cfg) -> QuadResult:
    panels = _panels(T0, T1, width)
    a, b = panels[:, 0], panels[:, 1]
    m = 0.5 * (a + b)
    f = np.asarray(func(np.concatenate([a, m, b])), dtype=complex)
    fa, fm, fb = np.split(f, 3)
    evals = f.size
    tol = cfg.abs_tol * (b - a) / (T1 - T0)
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    accepted: list[tuple[float, complex]] = []
    err_total = 0.0
    while a.size:
        if evals + 2 * a.size > cfg.max_evals:
            raise BudgetExceededError(
                f"max_evals = {cfg.max_evals} reached with {a.size} intervals unresolved"
            )
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        f2 = np.asarray(func(np.concatenate([lm, rm])), dtype=complex)
        flm, frm = np.split(f2, 2)
        evals += f2.size
        left = (m - a) / 6 * (fa + 4 * flm + fm)
        right = (b - m) / 6 * (fm + 4 * frm + fb)
        diff = left + right - whole
        ok = (np.abs(diff) <= 15 * tol) | ((b - a) < 1e-9 * max(1.0, abs(T1)))
        for lo, v, d in zip(a[ok], (left + right + diff / 15)[ok], diff[ok]):
            accepted.append((float(lo), complex(v)))
            err_total += abs(complex(d)) / 15
        nb = ~ok
        a, m, b = (np.concatenate([a[nb], m[nb]]), np.concatenate([lm[nb], rm[nb]]),
                   np.concatenate([m[nb], b[nb]]))
        fa, fm, fb = (np.concatenate([fa[nb], fm[nb]]), np.concatenate([flm[nb], frm[nb]]),
                      np.concatenate([fm[nb], fb[nb]]))
        whole = np.concatenate([left[nb], right[nb]])
        tol = np.concatenate([tol[nb], tol[nb]]) / 2
    accepted.sort(key=lambda item: item[0])
    return QuadResult(_fsum_complex(v for _, v in accepted), err_total, evals)


def integrate_vertical(func: Callable[[np.ndarray], np.ndarray], T0: float, T1: float,
                       cfg: QuadratureConfig | None = None, rate: float | None = None) -> QuadResult:
    """Integrate a vectorized function of t over [T0, T1] panel by panel.

    ``rate`` is the dominant oscillation rate of ``func`` (see
    ``QuadratureConfig.width_for``); panels wider than pi/rate are refused.
    """
    cfg = cfg or QuadratureConfig()
    if not T1 > T0:
        raise DomainError("need T0 < T1")
    width = cfg.width_for(max(abs(T0), abs(T1)), rate)
    if cfg.rule == "gauss-legendre-panels":
        return _gauss_kronrod(func, T0, T1, width, cfg)
    return _adaptive_simpson(func, T0, T1, width, cfg)


def moment_integrand(twok: int, evaluator: str = "reference", sigma: float = 0.5):
    if twok < 2 or twok % 2:
        raise DomainError("twok must be a positive even integer")
    if evaluator not in EVALUATORS:
        raise DomainError(f"unknown evaluator {evaluator!r}")
    if evaluator != "reference" and sigma != 0.5:
        raise DomainError("AFE evaluators are defined on the half line only")
    if evaluator == "reference":
        return lambda t: np.abs(zeta_reference(sigma + 1j * t)) ** twok
    if evaluator == "afe":
        return lambda t: np.abs(zeta_afe(0.5 + 1j * t)) ** twok
    return lambda t: np.abs(zeta_squared_afe(0.5 + 1j * t)) ** (twok // 2)


def integrate_moment_result(T0: float, T1: float, twok: int, evaluator: str = "reference",
                            cfg: QuadratureConfig | None = None, sigma: float = 0.5) -> QuadResult:
    if not 0 <= T0 < T1:
        raise DomainError("need 0 <= T0 < T1")
    if evaluator != "reference" and T0 < AFE_T_MIN:
        raise DomainError(f"AFE evaluators need T0 >= {AFE_T_MIN:g}")
    return integrate_vertical(moment_integrand(twok, evaluator, sigma), T0, T1, cfg)


def integrate_moment(T0: float, T1: float, twok: int, evaluator: str = "reference",
                     cfg: QuadratureConfig | None = None, sigma: float = 0.5) -> float:
    """int_{T0}^{T1} |zeta(sigma + it)|^twok dt (quadrature error only)."""
    return integrate_moment_result(T0, T1, twok, evaluator, cfg, sigma).value.real


def signed_first_moment(T: float, cfg: QuadratureConfig | None = None) -> complex:
    """int_0^T zeta(1/2 + it) dt."""
    if T < 10:
        raise DomainError("signed first moment needs T >= 10")
    return integrate_vertical(lambda t: zeta_reference(0.5 + 1j * t), 0.0, T, cfg).value


# -------------------------------------------------------------- predictions

_KIND_ALIASES = {
    "a": "refined-second", "refined-second": "refined-second",
    "a2pi": "refined-second-2pi", "refined-second-2pi": "refined-second-2pi",
    "b": "second", "second": "second",
    "c": "offline-second", "offline-second": "offline-second",
    "d": "fourth", "fourth": "fourth",
}


def predicted_main_term(kind: str, T: float, sigma: float | None = None) -> float:
    """Main terms for the moment integrals over [0, T].

    kinds: ``refined-second`` T log T + (2 gamma - 1) T;
    ``refined-second-2pi`` T log(T/2pi) + (2 gamma - 1) T; ``second`` T log T;
    ``offline-second`` T (zeta(2 sigma) - T^{1-2 sigma}/(2 sigma - 1)) for
    1/2 < sigma < 1; ``fourth`` T log^4 T / (2 pi^2).
    """
    try:
        kind = _KIND_ALIASES[kind]
    except KeyError:
        raise DomainError(f"unknown main-term kind {kind!r}") from None
    if T < 10:
        raise DomainError("main terms are tabulated for T >= 10")
    L = math.log(T)
    if kind == "refined-second":
        return T * L + (2 * EULER_GAMMA - 1) * T
    if kind == "refined-second-2pi":
        return T * math.log(T / (2 * math.pi)) + (2 * EULER_GAMMA - 1) * T
    if kind == "second":
        return T * L
    if kind == "fourth":
        return T * L**4 / (2 * math.pi**2)
    if sigma is None or not 0.5 < sigma < 1:
        raise DomainError("offline-second needs 1/2 < sigma < 1")
    zeta_2s = zeta_reference(2 * sigma).real
    return T * (zeta_2s - T ** (1 - 2 * sigma) / (2 * sigma - 1))


# ------------------------------------------------------------------ reports

@dataclass(frozen=True)
class MomentReport:
    kind: str
    k: str
    sigma: float
    T: float
    computed: float | complex
    predicted: float
    ratio: float
    evals: int
    seconds: float = 0.0

    CSV_COLUMNS = ("kind", "k", "sigma", "T", "computed", "predicted", "ratio", "evals", "seconds")

    def row(self) -> dict:
        d = asdict(self)
        if isinstance(self.computed, complex):
            d["computed"] = format_complex(self.computed)
        return d


def format_complex(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}i"


def moment_report(kind: str, T: float, sigma: float = 0.5, evaluator: str = "reference",
                  cfg: QuadratureConfig | None = None) -> MomentReport:
    """Compute one moment over [0, T] and compare with ``kind``'s main term.

    With an AFE evaluator the [0, 50] piece comes from the reference
    evaluator.
    """
    canonical = _KIND_ALIASES.get(kind, kind)
    twok = 4 if canonical == "fourth" else 2
    start = time.perf_counter()
    if evaluator == "reference":
        res = integrate_moment_result(0.0, T, twok, "reference", cfg, sigma)
        value, evals = res.value.real, res.evals
    else:
        head = integrate_moment_result(0.0, AFE_T_MIN, twok, "reference", cfg, sigma)
        tail = integrate_moment_result(AFE_T_MIN, T, twok, evaluator, cfg, sigma)
        value, evals = head.value.real + tail.value.real, head.evals + tail.evals
    predicted = predicted_main_term(canonical, T, sigma if canonical == "offline-second" else None)
    return MomentReport(canonical, str(twok // 2), sigma, T, value, predicted, value / predicted,
                        evals, time.perf_counter() - start)


def first_moment_report(T: float, cfg: QuadratureConfig | None = None) -> MomentReport:
    start = time.perf_counter()
    res = integrate_vertical(lambda t: zeta_reference(0.5 + 1j * t), 0.0, T, cfg)
    value = res.value
    return MomentReport("signed-first", "signed-first", 0.5, T, value, T, value.real / T,
                        res.evals, time.perf_counter() - start)


def reports_to_csv(reports: Iterable[MomentReport], comment: str | None = None) -> str:
    buf = io.StringIO()
    if comment:
        buf.write(f"# {comment}\n")
    writer = csv.DictWriter(buf, fieldnames=MomentReport.CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for rep in reports:
        writer.writerow(rep.row())
    return buf.getvalue()
