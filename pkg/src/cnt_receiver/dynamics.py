"""Motion of the cantilever tip: analytic steady state and RK4 integration.

The tip obeys ``m x'' + gamma x' + k x = F(t)``. For a sinusoidal drive the
bounded particular solution is another sinusoid; ``integrate_motion`` solves
the full initial value problem so the transient can be measured against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .model import CntParams, ParameterError, SymbolDuration, WaveSpec
from .signals import eval_wave, phasor_sum

MIN_STEPS_PER_PERIOD = 200
DEFAULT_STEPS_PER_PERIOD = 1000


class ResonanceError(ParameterError):
    """Undamped drive exactly at the natural frequency has no bounded response."""


def _detuning(p: CntParams, omega: float) -> float:
    return p.elasticity - p.mass * omega * omega


def _check_not_undamped_resonance(p: CntParams, omega: float) -> None:
    if p.viscosity == 0 and _detuning(p, omega) == 0:
        raise ResonanceError(
            f"undamped drive at the natural frequency (omega={omega!r}) has no steady state"
        )


def response_gain(p: CntParams, omega: float) -> float:
    """Displacement amplitude per unit force amplitude at ``omega``."""
    _check_not_undamped_resonance(p, omega)
    return 1.0 / math.hypot(_detuning(p, omega), p.viscosity * omega)


def response_phase(p: CntParams, omega: float) -> float:
    """Phase lag of the particular solution, in ``(-pi, 0]`` for positive damping.

    Uses ``atan2(-gamma*omega, k - m*omega**2)`` so the branch stays correct
    above resonance and the curve is continuous through it.
    """
    _check_not_undamped_resonance(p, omega)
    return math.atan2(-p.viscosity * omega, _detuning(p, omega))


def alternate_phase_branches(p: CntParams, omega: float) -> tuple[float, float]:
    """Both values a scalar-arctangent phase formula can take: ``{phase, phase - pi}``."""
    phase = response_phase(p, omega)
    return phase, phase - math.pi


@dataclass(frozen=True)
class SteadyStateResponse:
    """``amplitude * cos(drive_frequency * t + drive_phase + phase)``.

    ``phase`` is the oscillator's lag; ``drive_phase`` is the phase of the
    driving force. A negative force amplitude is folded into ``drive_phase``
    so ``amplitude`` stays nonnegative.
    """

    amplitude: float
    phase: float
    drive_frequency: float
    drive_phase: float = 0.0

    def __call__(self, t):
        return self.amplitude * np.cos(
            self.drive_frequency * np.asarray(t, dtype=float) + self.drive_phase + self.phase
        )

    def as_wave(self) -> WaveSpec:
        return WaveSpec(self.amplitude, self.drive_frequency, self.drive_phase + self.phase)


def steady_state_response(p: CntParams, drive: WaveSpec) -> SteadyStateResponse:
    """Particular solution for the force ``charge * drive(t)``."""
    omega = drive.angular_frequency
    force = p.charge * drive.amplitude
    drive_phase = drive.phase
    if force < 0:
        force, drive_phase = -force, drive_phase + math.pi
    return SteadyStateResponse(
        amplitude=force * response_gain(p, omega),
        phase=response_phase(p, omega),
        drive_frequency=omega,
        drive_phase=drive_phase,
    )


@dataclass(frozen=True)
class Superposition:
    """Signed sum of equal-frequency steady-state responses."""

    terms: tuple[tuple[SteadyStateResponse, float], ...]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for resp, sign in self.terms:
            out = out + sign * resp(t)
        return out

    @property
    def frequency(self) -> float:
        return self.terms[0][0].drive_frequency

    def as_wave(self) -> WaveSpec:
        """Collapse to a single sinusoid by phasor addition."""
        amp, phi = phasor_sum(
            (sign * r.amplitude, r.drive_phase + r.phase) for r, sign in self.terms
        )
        return WaveSpec(amp, self.frequency, phi)


def superpose(responses: Sequence[tuple[SteadyStateResponse, float]]) -> Superposition:
    terms = tuple((r, float(sign)) for r, sign in responses)
    if not terms:
        raise ValueError("superpose needs at least one response")
    omega = terms[0][0].drive_frequency
    for r, _ in terms[1:]:
        if not math.isclose(r.drive_frequency, omega, rel_tol=1e-12):
            raise ValueError("superpose only combines responses at one drive frequency")
    return Superposition(terms)


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    displacement: np.ndarray
    velocity: np.ndarray
    step: float

    def __post_init__(self):
        n = len(self.times)
        if len(self.displacement) != n or len(self.velocity) != n:
            raise ValueError("trajectory arrays must share one length")
        for arr in (self.times, self.displacement, self.velocity):
            arr.setflags(write=False)


def wave_forcing(p: CntParams, wave: WaveSpec) -> Callable[[np.ndarray], np.ndarray]:
    """Force ``charge * wave(t)`` as a vectorized callable."""
    return lambda t: p.charge * eval_wave(wave, t)


def integrate_motion(
    p: CntParams,
    forcing: Callable[[np.ndarray], np.ndarray],
    T: SymbolDuration,
    step: float | None = None,
    x0: float = 0.0,
    v0: float = 0.0,
    *,
    steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
) -> Trajectory:
    """Fixed-step classical RK4 over ``[0, T.duration]``.

    ``forcing`` is the full right-hand-side force and must accept an array of
    times. ``step`` defaults to ``T.period / steps_per_period``; it must fit a
    whole number of times into the symbol and give at least 200 steps per
    fundamental period.
    """
    if step is None:
        step = T.period / steps_per_period
    step = float(step)
    if not (math.isfinite(step) and step > 0):
        raise ParameterError("step must be positive")
    if T.period / step < MIN_STEPS_PER_PERIOD * (1 - 1e-9):
        raise ParameterError(
            f"step {step!r} gives fewer than {MIN_STEPS_PER_PERIOD} steps per period"
        )
    n = round(T.duration / step)
    if abs(n * step - T.duration) > 1e-9 * T.duration:
        raise ParameterError("step must divide the symbol duration into whole steps")
    h = T.duration / n

    t_half = np.arange(2 * n + 1) * (0.5 * h)
    f = np.asarray(forcing(t_half), dtype=float)
    if f.shape != t_half.shape:
        f = np.broadcast_to(f, t_half.shape)
    if not np.all(np.isfinite(f)):
        raise ValueError("forcing returned non-finite values")

    inv_m = 1.0 / p.mass
    c = p.viscosity * inv_m
    kk = p.elasticity * inv_m
    a = (f * inv_m).tolist()
    hh = 0.5 * h
    h6 = h / 6.0

    xs = [0.0] * (n + 1)
    vs = [0.0] * (n + 1)
    x = xs[0] = float(x0)
    v = vs[0] = float(v0)
    for i in range(n):
        a0 = a[2 * i]
        a1 = a[2 * i + 1]
        a2 = a[2 * i + 2]
        k1x = v
        k1v = a0 - c * v - kk * x
        k2x = v + hh * k1v
        k2v = a1 - c * k2x - kk * (x + hh * k1x)
        k3x = v + hh * k2v
        k3v = a1 - c * k3x - kk * (x + hh * k2x)
        k4x = v + h * k3v
        k4v = a2 - c * k4x - kk * (x + h * k3x)
        x = x + h6 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        v = v + h6 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        xs[i + 1] = x
        vs[i + 1] = v

    return Trajectory(t_half[::2].copy(), np.array(xs), np.array(vs), h)


def transient_bound(p: CntParams, T: SymbolDuration | float) -> float:
    """Envelope decay ``exp(-gamma * T / (2 m))`` of the free response over ``T``."""
    if p.viscosity <= 0:
        raise ParameterError("transient_bound needs positive viscosity")
    duration = T.duration if isinstance(T, SymbolDuration) else float(T)
    if duration < 0:
        raise ParameterError("duration must be nonnegative")
    return math.exp(-p.viscosity * duration / (2.0 * p.mass))


def periods_for_transient(p: CntParams, omega: float, target: float) -> int:
    """Smallest whole period count whose ``transient_bound`` is below ``target``."""
    if not 0 < target < 1:
        raise ValueError("target must lie in (0, 1)")
    if p.viscosity <= 0:
        raise ParameterError("transient decay needs positive viscosity")
    rate = p.viscosity / (2.0 * p.mass) * (2.0 * math.pi / omega)
    s = max(1, math.ceil(-math.log(target) / rate))
    while math.exp(-rate * s) >= target:
        s += 1
    return s
