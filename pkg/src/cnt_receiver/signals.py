"""Incoming wave, reference-wave designs, carriers and the carrier norm."""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .model import ParameterError, PhasePair, SymbolDuration, WaveSpec
from .quadrature import simpson

SQRT2 = math.sqrt(2.0)


class CarrierKind(enum.Enum):
    CONSTANT_ONE = "constant_one"
    DOUBLE_FREQUENCY_SINE = "double_frequency_sine"


@dataclass(frozen=True)
class CarrierSpec:
    """Signal multiplied into the current before integration.

    ``CONSTANT_ONE`` is the "no carrier" receiver. ``DOUBLE_FREQUENCY_SINE``
    is ``sqrt(2) * sin(2 * base_frequency * t + carrier_phase)``.
    """

    kind: CarrierKind = CarrierKind.CONSTANT_ONE
    carrier_phase: float = 0.0
    base_frequency: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", CarrierKind(self.kind))
        if not math.isfinite(self.carrier_phase):
            raise ParameterError("carrier_phase must be finite")
        if not (math.isfinite(self.base_frequency) and self.base_frequency > 0):
            raise ParameterError("base_frequency must be positive")

    @classmethod
    def constant_one(cls, base_frequency: float = 1.0) -> CarrierSpec:
        return cls(CarrierKind.CONSTANT_ONE, 0.0, base_frequency)

    @classmethod
    def double_frequency(cls, carrier_phase: float, base_frequency: float) -> CarrierSpec:
        return cls(CarrierKind.DOUBLE_FREQUENCY_SINE, carrier_phase, base_frequency)


class ReferenceKind(enum.Enum):
    NONE = "none"
    LINEAR_COMBINATION = "linear_combination"


@dataclass(frozen=True)
class ReferenceDesign:
    """Reference wave subtracted from the incoming wave at the tip.

    ``LINEAR_COMBINATION`` builds ``-eta * E_plus + (1 + eta) * E_minus``.
    """

    kind: ReferenceKind = ReferenceKind.NONE
    eta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ReferenceKind(self.kind))
        if not math.isfinite(self.eta):
            raise ParameterError("eta must be finite")

    @classmethod
    def none(cls) -> ReferenceDesign:
        return cls(ReferenceKind.NONE, 0.0)

    @classmethod
    def linear_combination(cls, eta: float) -> ReferenceDesign:
        return cls(ReferenceKind.LINEAR_COMBINATION, eta)


def eval_wave(w: WaveSpec, t):
    return w.amplitude * np.cos(w.angular_frequency * np.asarray(t, dtype=float) + w.phase)


def phasor_sum(terms: Iterable[tuple[float, float]]) -> tuple[float, float]:
    """Amplitude and phase of ``sum(a * cos(w t + phi))`` for equal-frequency terms.

    Returns a nonnegative amplitude; the phase comes from the two-argument
    arctangent of the summed phasor, so it is 0 for an empty/cancelled sum.
    """
    z = sum((a * cmath.exp(1j * phi) for a, phi in terms), 0j)
    return abs(z), math.atan2(z.imag, z.real)


def incoming_wave(incoming: WaveSpec, phase: float) -> WaveSpec:
    """The transmitted wave carrying ``phase``; only amplitude and frequency of ``incoming`` are used."""
    return incoming.with_phase(phase)


def reference_wave(d: ReferenceDesign, pair: PhasePair, incoming: WaveSpec) -> WaveSpec:
    """The reference wave collapsed into a single sinusoid at the incoming frequency."""
    if d.kind is ReferenceKind.NONE:
        return WaveSpec(0.0, incoming.angular_frequency, 0.0)
    a = incoming.amplitude
    amp, phi = phasor_sum([(-d.eta * a, pair.phase_plus), ((1.0 + d.eta) * a, pair.phase_minus)])
    return WaveSpec(amp, incoming.angular_frequency, phi)


def eval_reference(d: ReferenceDesign, pair: PhasePair, incoming: WaveSpec, t):
    t = np.asarray(t, dtype=float)
    if d.kind is ReferenceKind.NONE:
        return np.zeros_like(t)
    e_plus = eval_wave(incoming_wave(incoming, pair.phase_plus), t)
    e_minus = eval_wave(incoming_wave(incoming, pair.phase_minus), t)
    return -d.eta * e_plus + (1.0 + d.eta) * e_minus


def net_drive(d: ReferenceDesign, pair: PhasePair, incoming: WaveSpec, phase: float) -> WaveSpec:
    """``E_in - E_r`` as one sinusoid, for the symbol transmitted with ``phase``."""
    ref = reference_wave(d, pair, incoming)
    amp, phi = phasor_sum([(incoming.amplitude, phase), (-ref.amplitude, ref.phase)])
    return WaveSpec(amp, incoming.angular_frequency, phi)


def eval_carrier(c: CarrierSpec, t):
    t = np.asarray(t, dtype=float)
    if c.kind is CarrierKind.CONSTANT_ONE:
        return np.ones_like(t)
    return SQRT2 * np.sin(2.0 * c.base_frequency * t + c.carrier_phase)


def carrier_norm(c: CarrierSpec, T: SymbolDuration, nodes_per_period: int = 4096) -> float:
    """Mean square of the carrier over the symbol duration (Simpson quadrature)."""
    if nodes_per_period < 2 or nodes_per_period % 2:
        raise ValueError("nodes_per_period must be a positive even number")
    if c.kind is CarrierKind.CONSTANT_ONE:
        return 1.0
    if not math.isclose(T.angular_frequency, c.base_frequency, rel_tol=1e-12):
        raise ParameterError("symbol duration and carrier use different base frequencies")
    n = nodes_per_period * T.period_count
    h = T.duration / n
    t = np.arange(n + 1) * h
    return simpson(eval_carrier(c, t) ** 2, h) / T.duration
