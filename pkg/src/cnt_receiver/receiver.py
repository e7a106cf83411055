"""Field-emission current, correlating demodulator and binary phase detector."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .dynamics import DEFAULT_STEPS_PER_PERIOD, Trajectory, integrate_motion
from .model import CntParams, ParameterError, PhasePair, SymbolDuration, WaveSpec
from .quadrature import time_mean
from .signals import (
    CarrierSpec,
    ReferenceDesign,
    eval_carrier,
    eval_reference,
    eval_wave,
    incoming_wave,
)


class IndistinguishableDesignError(ValueError):
    """Both symbols produce the same noiseless statistic."""


class Symbol(enum.IntEnum):
    MINUS = -1
    PLUS = 1


class NoiseMode(enum.Enum):
    GAUSSIAN = "gaussian"
    PATH = "path"


@dataclass(frozen=True)
class NoiseSpec:
    """White current noise of intensity ``sigma``.

    In ``GAUSSIAN`` mode the integrated noise is drawn directly as
    ``N(0, sigma**2 / T_s)``. ``PATH`` mode builds Brownian increments on a
    grid of ``path_steps_per_period`` cells per period and correlates them
    with the carrier; it exists to check the variance law, not for speed.
    """

    sigma: float = 0.0
    seed: int = 0
    mode: NoiseMode = NoiseMode.GAUSSIAN
    path_steps_per_period: int = 256

    def __post_init__(self):
        object.__setattr__(self, "mode", NoiseMode(self.mode))
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise ParameterError("sigma must be nonnegative")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ParameterError("seed must be an unsigned 64-bit integer")
        if self.path_steps_per_period < 4:
            raise ParameterError("path_steps_per_period must be at least 4")


@dataclass(frozen=True)
class DemodResult:
    statistic_noiseless: float
    noise_sample: float
    statistic: float
    duration: SymbolDuration


@dataclass(frozen=True)
class DecisionContext:
    """Noiseless reference statistics of the two symbols."""

    d_plus_ref: float
    d_minus_ref: float
    ordering_known: bool = True

    def __post_init__(self):
        if self.d_plus_ref == self.d_minus_ref:
            raise IndistinguishableDesignError("reference statistics coincide")

    @property
    def threshold(self) -> float:
        return 0.5 * (self.d_plus_ref + self.d_minus_ref)

    @property
    def separation(self) -> float:
        return abs(self.d_plus_ref - self.d_minus_ref)


def emission_current(p: CntParams, x):
    """``I0 + I1 * x**2``."""
    x = np.asarray(x, dtype=float)
    return p.current_offset + p.current_gain * x * x


def noise_samples(noise: NoiseSpec, c: CarrierSpec, T: SymbolDuration, start: int, count: int) -> np.ndarray:
    """Integrated noise ``n_e`` for draw indices ``start .. start + count - 1``."""
    if noise.sigma == 0:
        return np.zeros(count)
    if noise.mode is NoiseMode.GAUSSIAN:
        z = rng.normals(noise.seed, rng.NOISE_STREAM, start, count)
        return noise.sigma / math.sqrt(T.duration) * z

    n = noise.path_steps_per_period * T.period_count
    h = T.duration / n
    fc = eval_carrier(c, np.arange(n) * h)
    out = np.empty(count)
    for j in range(count):
        dw = math.sqrt(h) * rng.normals(noise.seed, rng.PATH_STREAM, (start + j) * n, n)
        out[j] = noise.sigma / T.duration * float(fc @ dw)
    return out


def noise_sample(noise: NoiseSpec, c: CarrierSpec, T: SymbolDuration, index: int = 0) -> float:
    """One draw of the integrated noise, fixed by ``(noise.seed, index)``."""
    return float(noise_samples(noise, c, T, index, 1)[0])


def _infer_duration(traj: Trajectory, c: CarrierSpec) -> SymbolDuration:
    span = float(traj.times[-1] - traj.times[0])
    s = round(span * c.base_frequency / (2.0 * math.pi))
    if s < 1 or abs(s * 2.0 * math.pi / c.base_frequency - span) > 1e-9 * span:
        raise ParameterError("trajectory does not span whole carrier periods; pass T explicitly")
    return SymbolDuration(s, span)


def demodulate(
    p: CntParams,
    traj: Trajectory,
    c: CarrierSpec,
    noise: NoiseSpec = NoiseSpec(),
    T: SymbolDuration | None = None,
    index: int = 0,
) -> DemodResult:
    """Correlate the emission current with the carrier over the trajectory."""
    if T is None:
        T = _infer_duration(traj, c)
    d0 = time_mean(emission_current(p, traj.displacement) * eval_carrier(c, traj.times), traj.times)
    ne = noise_sample(noise, c, T, index)
    return DemodResult(d0, ne, d0 + ne, T)


def detect_statistics(statistic, ctx: DecisionContext) -> np.ndarray:
    """Vectorized nearest-reference rule; a statistic on the midpoint goes to PLUS."""
    statistic = np.asarray(statistic, dtype=float)
    if ctx.d_plus_ref > ctx.d_minus_ref:
        plus = statistic >= ctx.threshold
    else:
        plus = statistic <= ctx.threshold
    return np.where(plus, int(Symbol.PLUS), int(Symbol.MINUS))


def detect(d: DemodResult | float, ctx: DecisionContext) -> Symbol:
    value = d.statistic if isinstance(d, DemodResult) else float(d)
    return Symbol(int(detect_statistics(value, ctx)))


def symbol_phase(pair: PhasePair, symbol: Symbol) -> float:
    return pair.phase_plus if Symbol(symbol) is Symbol.PLUS else pair.phase_minus


def simulate_symbol(
    p: CntParams,
    incoming: WaveSpec,
    pair: PhasePair,
    design: ReferenceDesign,
    symbol: Symbol,
    T: SymbolDuration,
    steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
) -> Trajectory:
    """Tip trajectory from rest while ``symbol`` is transmitted."""
    wave = incoming_wave(incoming, symbol_phase(pair, symbol))

    def forcing(t):
        return p.charge * (eval_wave(wave, t) - eval_reference(design, pair, incoming, t))

    return integrate_motion(p, forcing, T, steps_per_period=steps_per_period)


def noiseless_statistic(
    p: CntParams,
    incoming: WaveSpec,
    pair: PhasePair,
    design: ReferenceDesign,
    carrier: CarrierSpec,
    T: SymbolDuration,
    symbol: Symbol,
    steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
) -> float:
    traj = simulate_symbol(p, incoming, pair, design, symbol, T, steps_per_period)
    return demodulate(p, traj, carrier, T=T).statistic_noiseless


def calibrate(
    p: CntParams,
    incoming: WaveSpec,
    pair: PhasePair,
    design: ReferenceDesign,
    carrier: CarrierSpec,
    T: SymbolDuration,
    steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
) -> DecisionContext:
    """Record the noiseless statistics of both symbols.

    The initialization symbols are taken as noise free; a separation below
    ``1e-12`` (relative to the statistic scale) is rejected.
    """
    args = (p, incoming, pair, design, carrier, T)
    d_plus = noiseless_statistic(*args, Symbol.PLUS, steps_per_period)
    d_minus = noiseless_statistic(*args, Symbol.MINUS, steps_per_period)
    scale = max(1.0, abs(d_plus), abs(d_minus))
    if abs(d_plus - d_minus) <= 1e-12 * scale:
        raise IndistinguishableDesignError(
            f"indistinguishable design: D0+={d_plus!r}, D0-={d_minus!r}"
        )
    return DecisionContext(d_plus, d_minus)
