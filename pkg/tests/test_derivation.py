import random
from fractions import Fraction

import pytest

from gsobe.algebra.derivation import (ABCDParams, intermediate_form, mass_equation, pipeline_theta,
                                      reduce_system, reduction_report, reduction_residual,
                                      solve_corrections, theta_closed_form, verify_reduction)
from gsobe.algebra.diffpoly import ALPHA, ETA, OrderIdeal, dp_substitute, eta
from gsobe.algebra.parampoly import ParamPoly, simplify
from gsobe.errors import ParameterError, VerificationFailure


def test_constraint_enforced():
    with pytest.raises(ParameterError):
        ABCDParams(Fraction(1, 12), Fraction(1, 12), Fraction(1, 12), Fraction(1, 6))


def test_default_params_reduce_exactly():
    p = ABCDParams()
    assert verify_reduction(p).is_zero()
    assert theta_closed_form(p) == Fraction(-1, 18)
    assert pipeline_theta(p) == Fraction(-1, 18)


@pytest.mark.parametrize("seed", range(20))
def test_random_params_reduce_exactly(seed):
    p = ABCDParams.random(random.Random(seed))
    assert verify_reduction(p).is_zero()
    assert pipeline_theta(p) == theta_closed_form(p)


def test_symbolic_reduction():
    p = ABCDParams.symbolic()
    assert verify_reduction(p).is_zero()
    assert simplify(ParamPoly.lift(pipeline_theta(p)) - theta_closed_form(p)) == 0


def test_first_order_corrections():
    p = ABCDParams.symbolic()
    corr = solve_corrections(p)
    assert corr.A == Fraction(-1, 4)
    assert corr.C == Fraction(-3, 2) and corr.D == Fraction(-1, 6)
    assert simplify(ParamPoly.lift(corr.B) - (p.c + p.d - p.a - p.b) / 2) == 0


def test_corrected_mass_law():
    # inserting w into the mass law yields eta_t = -eta_x - 3/2 alpha eta eta_x - ...
    p = ABCDParams()
    corr = solve_corrections(p)
    m = dp_substitute(mass_equation(p), corr.w_rule(), OrderIdeal(2))
    assert m.coefficient(eta(0, 1)) == 1
    assert m.coefficient(ALPHA * ETA * eta(1)) == Fraction(3, 2)


def test_intermediate_form_reduces_to_pipeline():
    p = ABCDParams.random(random.Random(7))
    corr = solve_corrections(p)
    assert dp_substitute(intermediate_form(p), corr.eta_t_rule()) == reduce_system(p)


def test_printed_target_leaves_quadratic_residual():
    p = ABCDParams()
    res = reduction_residual(p, "printed")
    assert res == Fraction(-5, 6) * ALPHA * (ETA ** 2).dx(2)
    with pytest.raises(VerificationFailure) as info:
        verify_reduction(p, "printed")
    assert sorted(info.value.terms) == [("alpha*eta*eta_xx", "-5/3"), ("alpha*eta_x*eta_x", "-5/3")]


def test_report_lines():
    rep = reduction_report(ABCDParams())
    assert rep.is_zero and rep.theta_matches
    assert rep.lines()[-1] == "residual: ZERO"
    bad = reduction_report(ABCDParams(), "printed")
    assert bad.lines()[-3].startswith("residual: NONZERO")


def test_unknown_target():
    with pytest.raises(ParameterError):
        verify_reduction(ABCDParams(), "other")
