import csv
import io
import math

import mpmath
import numpy as np
import pytest

from zetamoments.errors import BudgetExceededError, DomainError
from zetamoments.moments import (
    MomentReport, QuadratureConfig, integrate_moment, integrate_vertical, moment_report,
    predicted_main_term, reports_to_csv, signed_first_moment,
)
from zetamoments.special import EULER_GAMMA


@pytest.mark.parametrize("rule", ["gauss-legendre-panels", "adaptive-simpson"])
def test_quadrature_rules_on_known_integrals(rule):
    cfg = QuadratureConfig(rule=rule, abs_tol=1e-10)
    res = integrate_vertical(lambda t: np.cos(3 * t) + 1j * t**2, 0.0, 20.0, cfg, rate=3.0)
    assert abs(res.value - complex(math.sin(60) / 3, 20**3 / 3)) < 1e-8


def test_budget_exceeded():
    cfg = QuadratureConfig(abs_tol=1e-14, max_evals=100)
    with pytest.raises(BudgetExceededError):
        integrate_vertical(lambda t: np.abs(np.sin(40 * t)), 0.0, 100.0, cfg, rate=1.0)


def test_panel_width_invariant():
    assert QuadratureConfig().width_for(1000.0) == pytest.approx(math.pi / (2 * math.log(1000.0)))
    with pytest.raises(DomainError):
        QuadratureConfig(panel_width=1.0).width_for(1000.0)


@pytest.mark.slow
def test_second_moment_against_mpmath():
    mpmath.mp.dps = 15
    f = lambda t: abs(mpmath.zeta(mpmath.mpc(0.5, t))) ** 2  # noqa: E731
    ref = float(mpmath.quad(f, mpmath.linspace(0, 80, 41)))
    assert integrate_moment(0.0, 80.0, 2) == pytest.approx(ref, rel=1e-8)


def test_panel_refinement_and_additivity():
    base = integrate_moment(0.0, 200.0, 2)
    fine = integrate_moment(0.0, 200.0, 2, cfg=QuadratureConfig(panel_width=math.pi / (4 * math.log(200.0))))
    assert abs(base - fine) <= 1e-4 * base
    left = integrate_moment(0.0, 100.0, 2)
    right = integrate_moment(100.0, 200.0, 2)
    assert abs(left + right - base) <= 2 * QuadratureConfig().abs_tol


def test_afe_evaluator_cross_check():
    ref = integrate_moment(50.0, 2000.0, 2)
    afe = integrate_moment(50.0, 2000.0, 2, evaluator="afe")
    assert abs(afe - ref) <= 0.01 * ref
    with pytest.raises(DomainError):
        integrate_moment(0.0, 100.0, 2, evaluator="afe")


def test_predicted_main_terms():
    T = math.exp(10)
    assert predicted_main_term("b", T) == pytest.approx(10 * T)
    assert predicted_main_term("d", 2000.0) == pytest.approx(2000 * math.log(2000) ** 4 / (2 * math.pi**2))
    assert predicted_main_term("a", 1000.0) == pytest.approx(1000 * math.log(1000) + (2 * EULER_GAMMA - 1) * 1000)
    with pytest.raises(DomainError):
        predicted_main_term("c", 1000.0, 0.5)
    with pytest.raises(DomainError):
        predicted_main_term("zz", 1000.0)


@pytest.mark.parametrize("T", [1000.0, 2000.0])
def test_offline_kind_near_half_within_factor_two(T):
    value = predicted_main_term("c", T, 0.5 + 1 / math.log(T))
    assert 0.5 <= value / (T * math.log(T)) <= 2.0


def test_first_moment_at_1000():
    value = signed_first_moment(1000.0)
    assert abs(value - 1000.0) / 1000.0 <= 0.25


def test_report_csv_columns():
    rep = moment_report("a2pi", 300.0)
    assert isinstance(rep, MomentReport)
    assert rep.ratio == pytest.approx(rep.computed / rep.predicted)
    text = reports_to_csv([rep], comment="test")
    lines = text.splitlines()
    assert lines[0] == "# test"
    assert next(csv.reader(io.StringIO(lines[1]))) == list(MomentReport.CSV_COLUMNS)
