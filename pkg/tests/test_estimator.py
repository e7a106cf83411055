import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from cnt_receiver import CntParams, PhaseReceiver
from cnt_receiver.metrics import j_ss_quadrature
from cnt_receiver.model import PhasePair, WaveSpec
from cnt_receiver.signals import CarrierSpec, ReferenceDesign


def test_get_params_and_clone():
    rx = PhaseReceiver(eta=1.5, period_count=10, seed=7)
    params = rx.get_params()
    assert params["eta"] == 1.5 and params["seed"] == 7
    twin = clone(rx)
    assert twin.get_params() == params
    rx.set_params(sigma=2.0)
    assert rx.sigma == 2.0


def test_unfitted():
    with pytest.raises(NotFittedError):
        PhaseReceiver().predict([[0.0]])


@pytest.mark.parametrize("variant", ["no_carrier", "no_reference"])
def test_noiseless_round_trip(variant):
    rx = PhaseReceiver(variant=variant, period_count=20).fit()
    symbols = np.array([1, -1, -1, 1, 1])
    stats = rx.transmit(symbols)
    assert stats.shape == (5, 1)
    assert np.array_equal(rx.predict(stats), symbols)
    assert rx.score(stats, symbols) == 1.0


def test_separation_approaches_steady_state():
    rx = PhaseReceiver(period_count=200).fit()
    jss = j_ss_quadrature(CntParams(), WaveSpec(1, 1), PhasePair(0, math.pi),
                          ReferenceDesign.linear_combination(0.0), CarrierSpec.constant_one())
    assert rx.separation_ == pytest.approx(jss, rel=0.03)


def test_noise_is_reproducible_and_indexed():
    rx = PhaseReceiver(period_count=10, sigma=30.0, seed=3).fit()
    s = np.ones(50, dtype=int)
    a = rx.transmit(s)
    assert np.array_equal(a, rx.transmit(s))
    assert np.array_equal(a[10:], rx.transmit(s[10:], start=10))
    assert np.std(a) == pytest.approx(rx.noise_std_, rel=0.3)


def test_decision_function_sign():
    rx = PhaseReceiver(period_count=10).fit()
    ctx = rx.context_
    d = rx.decision_function([[ctx.d_plus_ref], [ctx.d_minus_ref], [ctx.threshold]])
    assert d[0] > 0 > d[1]
    assert d[2] == 0


def test_overrides():
    rx = PhaseReceiver(variant="no_reference", phase_plus=-0.3, phase_minus=0.3, carrier_phase=0.1)
    _, _, pair, ref, carrier, _, _ = rx.resolve()
    assert pair == PhasePair(-0.3, 0.3)
    assert carrier.carrier_phase == 0.1
    assert ref == ReferenceDesign.none()


def test_rejects_bad_input():
    rx = PhaseReceiver(period_count=5).fit()
    with pytest.raises(ValueError):
        rx.transmit([0, 1])
    with pytest.raises(ValueError):
        rx.predict(np.zeros((3, 2)))
