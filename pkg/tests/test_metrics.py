import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import exact_j
from scipy.integrate import solve_ivp

from cnt_receiver.dynamics import ResonanceError
from cnt_receiver.metrics import (
    ClosedFormNotApplicable,
    closed_form,
    j_closed_form_no_carrier,
    j_closed_form_no_reference,
    j_numeric,
    j_ss_quadrature,
    j_ss_quadrature_regrouped,
    mag_coef,
    performance_report,
    require_no_carrier,
    require_no_reference,
    theta_ss,
)
from cnt_receiver.model import CntParams, DegeneratePhaseWarning, PhasePair, WaveSpec, symbol_duration
from cnt_receiver.signals import CarrierSpec, ReferenceDesign

UNIT_GAIN = CntParams(viscosity=1.0)  # A_tilde = 1 at omega = 1
# mpmath, 30 digits
MAG_Q2_A3 = 1.99557031571321800617450349478
THETA_G02_W2 = -3.00904112129311920992052272151

PARAM_SETS = [CntParams(), CntParams(mass=0.8, viscosity=0.35, elasticity=2.2, charge=-1.3, current_gain=0.6)]
NO_CARRIER_GRID = [(eta, d) for eta in (-2, -1, 0, 0.5, 1) for d in (math.pi / 4, math.pi / 2, math.pi, 3 * math.pi / 2)]
NO_REFERENCE_GRID = [(tm, off) for tm in (math.pi / 8, math.pi / 4, 3 * math.pi / 8) for off in (0.0, math.pi / 4, -math.pi / 4)]


def _pair(a, b):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegeneratePhaseWarning)
        return PhasePair(a, b)


@pytest.mark.parametrize(
    "p, amp, omega, expected",
    [
        (CntParams(viscosity=1.0), 1.0, 1.0, 1.0),
        (CntParams(elasticity=2.0, viscosity=0.0), 1.0, 1.0, 1.0),
        (CntParams(charge=2.0, viscosity=0.1), 3.0, 2.0, MAG_Q2_A3),
    ],
)
def test_mag_coef(p, amp, omega, expected):
    assert mag_coef(p, amp, omega) == pytest.approx(expected, rel=1e-14)


def test_mag_coef_rejects_undamped_resonance():
    with pytest.raises(ResonanceError):
        mag_coef(CntParams(viscosity=0.0), 1.0, 1.0)


def test_theta_ss_examples():
    assert theta_ss(CntParams(viscosity=0.3), 1.0) == pytest.approx(-math.pi / 2)
    assert theta_ss(CntParams(elasticity=2.0, viscosity=0.0), 1.0) == 0.0
    assert theta_ss(CntParams(viscosity=0.2), 2.0) == pytest.approx(THETA_G02_W2, rel=1e-14)
    with pytest.raises(ResonanceError):
        theta_ss(CntParams(viscosity=0.0), 1.0)


def test_theta_ss_branch_against_measured_lag():
    omega = 2.0
    sol = solve_ivp(lambda t, y: [y[1], math.cos(omega * t) - 0.2 * y[1] - y[0]], (0, 200 * math.pi), [0, 0],
                    method="DOP853", rtol=1e-11, atol=1e-13, dense_output=True)
    t = 199 * math.pi + np.arange(2000) * math.pi / 2000
    x = sol.sol(t)[0]
    lag = math.atan2(-2 * np.mean(x * np.sin(omega * t)), 2 * np.mean(x * np.cos(omega * t)))
    assert lag == pytest.approx(THETA_G02_W2, abs=1e-6)


def test_no_carrier_closed_form_examples():
    assert j_closed_form_no_carrier(UNIT_GAIN, PhasePair(0, math.pi), -0.5, 1.0, 1.0) == 0.0
    assert j_closed_form_no_carrier(UNIT_GAIN, PhasePair(0, math.pi), 0.0, 1.0, 1.0) == pytest.approx(2.0)
    assert j_closed_form_no_carrier(UNIT_GAIN, PhasePair(0, math.pi / 2), 1.0, 1.0, 1.0) == pytest.approx(3.0)


def test_no_reference_closed_form_examples():
    th = theta_ss(UNIT_GAIN, 1.0)
    assert j_closed_form_no_reference(UNIT_GAIN, math.pi / 4, 2 * th, 1.0, 1.0) == pytest.approx(1 / math.sqrt(2))
    assert j_closed_form_no_reference(UNIT_GAIN, 0.0, 2 * th, 1.0, 1.0) == 0.0
    assert j_closed_form_no_reference(UNIT_GAIN, math.pi / 4, 2 * th + math.pi / 2, 1.0, 1.0) < 1e-15


@pytest.mark.parametrize("p", PARAM_SETS)
@pytest.mark.parametrize("eta, delta", NO_CARRIER_GRID)
def test_no_carrier_closed_form_equals_quadrature(p, eta, delta):
    inc = WaveSpec(1.4, 0.9)
    pair = PhasePair(0.25, 0.25 + delta)
    design = ReferenceDesign.linear_combination(eta)
    one = CarrierSpec.constant_one(0.9)
    cf = j_closed_form_no_carrier(p, pair, eta, 1.4, 0.9)
    assert j_ss_quadrature(p, inc, pair, design, one) == pytest.approx(cf, rel=1e-8)
    assert j_ss_quadrature_regrouped(p, inc, pair, design, one) == pytest.approx(cf, rel=1e-8)


@pytest.mark.parametrize("p", PARAM_SETS)
@pytest.mark.parametrize("tm, off", NO_REFERENCE_GRID)
def test_no_reference_closed_form_equals_quadrature(p, tm, off):
    inc = WaveSpec(0.7, 1.6)
    tc = 2 * theta_ss(p, 1.6) + off
    pair = PhasePair(-tm, tm)
    carrier = CarrierSpec.double_frequency(tc, 1.6)
    cf = j_closed_form_no_reference(p, tm, tc, 0.7, 1.6)
    assert j_ss_quadrature(p, inc, pair, ReferenceDesign.none(), carrier) == pytest.approx(cf, rel=1e-8)
    assert j_ss_quadrature_regrouped(p, inc, pair, ReferenceDesign.none(), carrier) == pytest.approx(cf, rel=1e-8)
    assert closed_form(p, inc, pair, ReferenceDesign.none(), carrier) == pytest.approx(cf, rel=1e-15)


def test_scalar_arctan_branch_gives_the_same_distance():
    # above resonance the lag may be read as theta_ss or theta_ss - pi; 2*theta_ss moves by 2*pi
    p = CntParams(viscosity=0.2)
    th = theta_ss(p, 2.0)
    a = j_closed_form_no_reference(p, 0.6, 2 * th, 1.0, 2.0)
    b = j_closed_form_no_reference(p, 0.6, 2 * (th - math.pi), 1.0, 2.0)
    assert a == pytest.approx(b, rel=1e-12)


def test_j_ss_degenerate_cases(params, incoming):
    th = theta_ss(params, 1.0)
    one = CarrierSpec.constant_one()
    assert j_ss_quadrature(params, incoming, _pair(0.7, 0.7), ReferenceDesign.linear_combination(0.4), one) == 0.0
    orth = CarrierSpec.double_frequency(2 * th + math.pi / 2, 1.0)
    assert j_ss_quadrature(params, incoming, PhasePair(-math.pi / 4, math.pi / 4), ReferenceDesign.none(), orth) < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_no_carrier_relabel_symmetry(tp, tm, eta):
    p = CntParams(viscosity=0.3)
    inc = WaveSpec(1.0, 1.0)
    one = CarrierSpec.constant_one()
    a = j_closed_form_no_carrier(p, _pair(tp, tm), eta, 1.0, 1.0)
    b = j_closed_form_no_carrier(p, _pair(tm, tp), -(1 + eta), 1.0, 1.0)
    assert a == pytest.approx(b, rel=1e-12, abs=1e-12)
    qa = j_ss_quadrature(p, inc, _pair(tp, tm), ReferenceDesign.linear_combination(eta), one)
    qb = j_ss_quadrature(p, inc, _pair(tm, tp), ReferenceDesign.linear_combination(-(1 + eta)), one)
    assert qa == pytest.approx(qb, rel=1e-9, abs=1e-9)


def test_sign_of_current_gain_is_irrelevant():
    pos, neg = CntParams(current_gain=2.0), CntParams(current_gain=-2.0)
    pair = PhasePair(0.1, 2.0)
    assert j_closed_form_no_carrier(pos, pair, 0.3, 1, 1) == j_closed_form_no_carrier(neg, pair, 0.3, 1, 1)
    assert j_closed_form_no_reference(pos, 0.5, 0.2, 1, 1) == j_closed_form_no_reference(neg, 0.5, 0.2, 1, 1)


def test_applicability_is_enforced():
    lc = ReferenceDesign.linear_combination(0.0)
    df = CarrierSpec.double_frequency(0.0, 1.0)
    with pytest.raises(ClosedFormNotApplicable):
        require_no_carrier(lc, df)
    with pytest.raises(ClosedFormNotApplicable):
        require_no_carrier(ReferenceDesign.none(), CarrierSpec.constant_one())
    with pytest.raises(ClosedFormNotApplicable):
        require_no_reference(ReferenceDesign.none(), df, PhasePair(0.1, 0.5), 1.0)
    with pytest.raises(ClosedFormNotApplicable):
        require_no_reference(ReferenceDesign.none(), CarrierSpec.double_frequency(0.0, 2.0), PhasePair(-0.5, 0.5), 1.0)
    assert closed_form(CntParams(), WaveSpec(1, 1), PhasePair(0.1, 0.5), ReferenceDesign.none(), df) is None


@pytest.mark.parametrize(
    "pair, eta, theta_c",
    [
        (PhasePair(0.0, math.pi), 0.0, None),
        (PhasePair(-math.pi / 4, math.pi / 4), None, -math.pi),
    ],
)
def test_j_numeric_matches_exact_oracle(params, incoming, pair, eta, theta_c):
    design = ReferenceDesign.none() if eta is None else ReferenceDesign.linear_combination(eta)
    carrier = CarrierSpec.constant_one() if theta_c is None else CarrierSpec.double_frequency(theta_c, 1.0)
    T = symbol_duration(1.0, 200)
    oracle = exact_j(1, 0.1, 1, 1, 1, 1, 1, pair.phase_plus, pair.phase_minus, eta, theta_c, 200)
    assert j_numeric(params, incoming, pair, design, carrier, T) == pytest.approx(oracle, rel=1e-8)


def test_j_numeric_off_resonance_design_matches_oracle():
    p = CntParams(mass=0.8, viscosity=0.35, elasticity=2.2, charge=-1.3, current_gain=0.6)
    inc = WaveSpec(1.1, 1.0)
    pair = PhasePair(0.3, 2.1)
    T = symbol_duration(1.0, 40)
    jn = j_numeric(p, inc, pair, ReferenceDesign.linear_combination(0.7), CarrierSpec.double_frequency(0.4, 1.0), T)
    oracle = exact_j(0.8, 0.35, 2.2, -1.3, 0.6, 1.1, 1.0, 0.3, 2.1, 0.7, 0.4, 40)
    assert jn == pytest.approx(oracle, rel=1e-8)


def test_j_numeric_equal_phases_is_zero(params, incoming):
    pair = _pair(0.2, 0.2)
    T = symbol_duration(1.0, 3)
    assert j_numeric(params, incoming, pair, ReferenceDesign.linear_combination(0.0), CarrierSpec.constant_one(), T) == 0.0


def test_transient_gap_falls_like_one_over_s(params, incoming):
    # on resonance the transient leaves an O(1/s) bias in J, not an exponentially small one
    pair = PhasePair(0.0, math.pi)
    design, one = ReferenceDesign.linear_combination(0.0), CarrierSpec.constant_one()
    jss = j_ss_quadrature(params, incoming, pair, design, one)
    scaled = []
    for s in (50, 100):
        jn = j_numeric(params, incoming, pair, design, one, symbol_duration(1.0, s))
        scaled.append(s * abs(jn - jss) / jss)
    assert scaled[0] == pytest.approx(scaled[1], rel=0.01)
    assert scaled[1] == pytest.approx(15 / math.pi, rel=0.01)


def test_performance_report(params, incoming):
    pair = PhasePair(0.0, math.pi)
    r = performance_report(params, incoming, pair, ReferenceDesign.linear_combination(0.0), CarrierSpec.constant_one())
    assert r.j_numeric is None
    assert r.j_closed_form == pytest.approx(200.0)
    assert r.j_ss_quadrature == pytest.approx(200.0, rel=1e-12)
    assert r.mag_coef == pytest.approx(10.0)
    assert r.theta_ss == pytest.approx(-math.pi / 2)
