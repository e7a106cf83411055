"""Parameter records shared by the rest of the package.

Every record is a frozen dataclass that validates itself on construction, so
downstream code never re-checks physical ranges.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass


class ParameterError(ValueError):
    """Raised when a parameter record is outside its documented domain."""


class DegeneratePhaseWarning(UserWarning):
    """Both symbols use the same phase."""


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ParameterError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class CntParams:
    """Cantilever constants plus the two coefficients of the current map.

    Defaults are the normalized set used throughout the tests: unit mass,
    stiffness and charge with light damping, which puts ``omega = 1`` exactly
    on resonance.
    """

    mass: float = 1.0
    viscosity: float = 0.1
    elasticity: float = 1.0
    charge: float = 1.0
    current_offset: float = 0.0
    current_gain: float = 1.0

    def __post_init__(self):
        validate_params(self)

    def natural_frequency(self) -> float:
        return math.sqrt(self.elasticity / self.mass)


def validate_params(p: CntParams) -> CntParams:
    for name in ("mass", "viscosity", "elasticity", "charge", "current_offset", "current_gain"):
        _finite(name, getattr(p, name))
    if p.mass <= 0:
        raise ParameterError("mass must be positive")
    if p.elasticity <= 0:
        raise ParameterError("elasticity must be positive")
    if p.viscosity < 0:
        raise ParameterError("viscosity must be nonnegative")
    return p


@dataclass(frozen=True)
class WaveSpec:
    """``amplitude * cos(angular_frequency * t + phase)``."""

    amplitude: float
    angular_frequency: float
    phase: float = 0.0

    def __post_init__(self):
        _finite("amplitude", self.amplitude)
        _finite("phase", self.phase)
        if not _finite("angular_frequency", self.angular_frequency) > 0:
            raise ParameterError("angular_frequency must be positive")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.angular_frequency

    def with_phase(self, phase: float) -> WaveSpec:
        return WaveSpec(self.amplitude, self.angular_frequency, phase)


def same_phase(a: float, b: float, atol: float = 1e-12) -> bool:
    """True when two angles coincide modulo 2*pi."""
    d = math.remainder(a - b, 2.0 * math.pi)
    return abs(d) <= atol


@dataclass(frozen=True)
class PhasePair:
    """The two transmitted phases; ``phase_plus`` encodes the + symbol.

    Equal phases (mod 2*pi) are accepted with a warning so degenerate designs
    stay testable.
    """

    phase_plus: float
    phase_minus: float

    def __post_init__(self):
        _finite("phase_plus", self.phase_plus)
        _finite("phase_minus", self.phase_minus)
        if same_phase(self.phase_plus, self.phase_minus):
            warnings.warn(
                "phase_plus equals phase_minus modulo 2*pi; the symbols are indistinguishable",
                DegeneratePhaseWarning,
                stacklevel=3,
            )

    @property
    def difference(self) -> float:
        """``phase_minus - phase_plus``."""
        return self.phase_minus - self.phase_plus

    def swapped(self) -> PhasePair:
        return PhasePair(self.phase_minus, self.phase_plus)


@dataclass(frozen=True)
class SymbolDuration:
    period_count: int
    duration: float

    def __post_init__(self):
        if isinstance(self.period_count, bool) or int(self.period_count) != self.period_count:
            raise ParameterError("period_count must be an integer")
        if self.period_count < 1:
            raise ParameterError("period_count must be at least 1")
        if not _finite("duration", self.duration) > 0:
            raise ParameterError("duration must be positive")

    @property
    def period(self) -> float:
        """Length of one fundamental period."""
        return self.duration / self.period_count

    @property
    def angular_frequency(self) -> float:
        return 2.0 * math.pi / self.period


def symbol_duration(omega_in: float, s: int) -> SymbolDuration:
    """Symbol time spanning ``s`` whole periods of the incoming wave."""
    if not _finite("omega_in", omega_in) > 0:
        raise ParameterError("omega_in must be positive")
    if isinstance(s, bool) or int(s) != s or s < 1:
        raise ParameterError(f"period count s must be a positive integer, got {s!r}")
    s = int(s)
    return SymbolDuration(s, 2.0 * math.pi / omega_in * s)
