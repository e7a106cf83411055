"""Constellation distance: full simulation, steady-state quadrature, closed forms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    DEFAULT_STEPS_PER_PERIOD,
    Superposition,
    response_gain,
    response_phase,
    steady_state_response,
    superpose,
)
from .model import CntParams, PhasePair, SymbolDuration, WaveSpec, same_phase
from .quadrature import simpson
from .receiver import Symbol, noiseless_statistic
from .signals import (
    SQRT2,
    CarrierKind,
    CarrierSpec,
    ReferenceDesign,
    ReferenceKind,
    eval_carrier,
    incoming_wave,
    phasor_sum,
    reference_wave,
)

DEFAULT_NODES_PER_PERIOD = 4096


class ClosedFormNotApplicable(ValueError):
    """The design does not satisfy the hypotheses of the requested closed form."""


@dataclass(frozen=True)
class PerformanceReport:
    j_numeric: float | None
    j_ss_quadrature: float
    j_closed_form: float | None
    mag_coef: float
    theta_ss: float


def mag_coef(p: CntParams, A_in: float, omega_in: float) -> float:
    """Steady-state displacement amplitude for the drive ``charge * A_in * cos(omega_in t)``."""
    return p.charge * A_in * response_gain(p, omega_in)


def theta_ss(p: CntParams, omega_in: float) -> float:
    return response_phase(p, omega_in)


def steady_state_displacement(
    p: CntParams,
    incoming: WaveSpec,
    pair: PhasePair,
    design: ReferenceDesign,
    symbol: Symbol,
) -> Superposition:
    """``x_Ein - x_Er`` for one symbol, built from the responses to each wave.

    The reference is expanded into its two incoming-wave components, so no
    phasor addition is involved here.
    """
    resp_plus = steady_state_response(p, incoming_wave(incoming, pair.phase_plus))
    resp_minus = steady_state_response(p, incoming_wave(incoming, pair.phase_minus))
    terms = [(resp_plus if symbol is Symbol.PLUS else resp_minus, 1.0)]
    if design.kind is ReferenceKind.LINEAR_COMBINATION:
        terms += [(resp_plus, design.eta), (resp_minus, -(1.0 + design.eta))]
    return superpose(terms)


def _one_period_grid(omega: float, nodes: int) -> tuple[np.ndarray, float]:
    if nodes < 2 or nodes % 2:
        raise ValueError("nodes_per_period must be a positive even number")
    period = 2.0 * math.pi / omega
    h = period / nodes
    return np.arange(nodes + 1) * h, h


def j_ss_quadrature(
    p: CntParams,
    incoming: WaveSpec,
    pair: PhasePair,
    design: ReferenceDesign,
    carrier: CarrierSpec,
    nodes_per_period: int = DEFAULT_NODES_PER_PERIOD,
) -> float:
    """``|I1/T1 * integral over one period of (x+ + x-)(x+ - x-) f_c|`` from analytic steady states."""
    x_plus = steady_state_displacement(p, incoming, pair, design, Symbol.PLUS)
    x_minus = steady_state_displacement(p, incoming, pair, design, Symbol.MINUS)
    t, h = _one_period_grid(incoming.angular_frequency, nodes_per_period)
    xp, xm = x_plus(t), x_minus(t)
    integrand = (xp + xm) * (xp - xm) * eval_carrier(carrier, t)
    return abs(p.current_gain * simpson(integrand, h) / t[-1])


def j_ss_quadrature_regrouped(
    p: CntParams,
    incoming: WaveSpec,
    pair: PhasePair,
    design: ReferenceDesign,
    carrier: CarrierSpec,
    nodes_per_period: int = DEFAULT_NODES_PER_PERIOD,
) -> float:
    """Same index via ``(2 x_{E-} - 2 x_{Er} + x_{E+ - E-}) * x_{E+ - E-} * f_c``.

    Each drive is first collapsed to one sinusoid by phasor addition, which
    makes this an independent route to ``j_ss_quadrature``.
    """
    omega = incoming.angular_frequency
    a = incoming.amplitude
    x_minus = steady_state_response(p, incoming_wave(incoming, pair.phase_minus))
    x_ref = steady_state_response(p, reference_wave(design, pair, incoming))
    diff_amp, diff_phase = phasor_sum([(a, pair.phase_plus), (-a, pair.phase_minus)])
    x_diff = steady_state_response(p, WaveSpec(diff_amp, omega, diff_phase))
    t, h = _one_period_grid(omega, nodes_per_period)
    d = x_diff(t)
    integrand = (2.0 * x_minus(t) - 2.0 * x_ref(t) + d) * d * eval_carrier(carrier, t)
    return abs(p.current_gain * simpson(integrand, h) / t[-1])


def j_closed_form_no_carrier(p: CntParams, pair: PhasePair, eta: float, A_in: float, omega_in: float) -> float:
    """Constellation distance of the no-carrier receiver with the linear-combination reference."""
    a = mag_coef(p, A_in, omega_in)
    return abs(p.current_gain * a * a * (2.0 * eta + 1.0)) * (1.0 - math.cos(pair.difference))


def j_closed_form_no_reference(p: CntParams, theta_minus: float, theta_c: float, A_in: float, omega_in: float) -> float:
    """Constellation distance of the no-reference receiver with antisymmetric phases."""
    a = mag_coef(p, A_in, omega_in)
    th = theta_ss(p, omega_in)
    return abs(p.current_gain * a * a * math.sin(2.0 * theta_minus) * math.cos(theta_c - 2.0 * th)) / SQRT2


def require_no_carrier(design: ReferenceDesign, carrier: CarrierSpec) -> None:
    if carrier.kind is not CarrierKind.CONSTANT_ONE:
        raise ClosedFormNotApplicable("no-carrier closed form needs the constant-one carrier")
    if design.kind is not ReferenceKind.LINEAR_COMBINATION:
        raise ClosedFormNotApplicable("no-carrier closed form needs the linear-combination reference")


def require_no_reference(design: ReferenceDesign, carrier: CarrierSpec, pair: PhasePair, omega_in: float) -> None:
    if design.kind is not ReferenceKind.NONE:
        raise ClosedFormNotApplicable("no-reference closed form needs the reference wave to be absent")
    if carrier.kind is not CarrierKind.DOUBLE_FREQUENCY_SINE:
        raise ClosedFormNotApplicable("no-reference closed form needs the double-frequency carrier")
    if not math.isclose(carrier.base_frequency, omega_in, rel_tol=1e-12):
        raise ClosedFormNotApplicable("carrier must run at twice the incoming frequency")
    if not same_phase(pair.phase_plus, -pair.phase_minus):
        raise ClosedFormNotApplicable("no-reference closed form needs phase_plus == -phase_minus")


def closed_form(
    p: CntParams,
    incoming: WaveSpec,
    pair: PhasePair,
    design: ReferenceDesign,
    carrier: CarrierSpec,
) -> float | None:
    """Whichever closed form applies to the design, or ``None``."""
    a, omega = incoming.amplitude, incoming.angular_frequency
    try:
        require_no_carrier(design, carrier)
        return j_closed_form_no_carrier(p, pair, design.eta, a, omega)
    except ClosedFormNotApplicable:
        pass
    try:
        require_no_reference(design, carrier, pair, omega)
        return j_closed_form_no_reference(p, pair.phase_minus, carrier.carrier_phase, a, omega)
    except ClosedFormNotApplicable:
        return None


def j_numeric(
    p: CntParams,
    incoming: WaveSpec,
    pair: PhasePair,
    design: ReferenceDesign,
    carrier: CarrierSpec,
    T: SymbolDuration,
    steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
) -> float:
    """``|D0+ - D0-|`` from two noiseless runs of the whole receiver, each from rest."""
    args = (p, incoming, pair, design, carrier, T)
    d_plus = noiseless_statistic(*args, Symbol.PLUS, steps_per_period)
    d_minus = noiseless_statistic(*args, Symbol.MINUS, steps_per_period)
    return abs(d_plus - d_minus)


def performance_report(
    p: CntParams,
    incoming: WaveSpec,
    pair: PhasePair,
    design: ReferenceDesign,
    carrier: CarrierSpec,
    T: SymbolDuration | None = None,
    steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
) -> PerformanceReport:
    """All three distance estimates; ``j_numeric`` is skipped when ``T`` is None."""
    omega = incoming.angular_frequency
    jn = None if T is None else j_numeric(p, incoming, pair, design, carrier, T, steps_per_period)
    return PerformanceReport(
        j_numeric=jn,
        j_ss_quadrature=j_ss_quadrature(p, incoming, pair, design, carrier),
        j_closed_form=closed_form(p, incoming, pair, design, carrier),
        mag_coef=mag_coef(p, incoming.amplitude, omega),
        theta_ss=theta_ss(p, omega),
    )
