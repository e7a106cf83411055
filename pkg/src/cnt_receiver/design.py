"""The two simplified receivers and a brute-force check of their optimal settings."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .dynamics import DEFAULT_STEPS_PER_PERIOD
from .metrics import (
    j_closed_form_no_carrier,
    j_closed_form_no_reference,
    j_numeric,
    j_ss_quadrature,
    mag_coef,
    theta_ss,
)
from .model import (
    CntParams,
    DegeneratePhaseWarning,
    ParameterError,
    PhasePair,
    WaveSpec,
    same_phase,
    symbol_duration,
)
from .signals import CarrierKind, CarrierSpec, ReferenceDesign, ReferenceKind

TWO_PI = 2.0 * math.pi
MIN_RESOLUTION = 32


class Variant(enum.Enum):
    NO_CARRIER = "no_carrier"
    NO_REFERENCE = "no_reference"


class OptimalityError(AssertionError):
    """Grid search disagrees with the analytic maximizer."""


@dataclass(frozen=True)
class DesignChoice:
    variant: Variant
    reference: ReferenceDesign
    carrier: CarrierSpec
    phases: PhasePair
    predicted_j: float

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.variant is Variant.NO_CARRIER:
            if self.carrier.kind is not CarrierKind.CONSTANT_ONE:
                raise ParameterError("no-carrier design must use the constant-one carrier")
            if self.reference.kind is not ReferenceKind.LINEAR_COMBINATION:
                raise ParameterError("no-carrier design must use the linear-combination reference")
        else:
            if self.reference.kind is not ReferenceKind.NONE:
                raise ParameterError("no-reference design must not use a reference wave")
            if self.carrier.kind is not CarrierKind.DOUBLE_FREQUENCY_SINE:
                raise ParameterError("no-reference design must use the double-frequency carrier")
            if not same_phase(self.phases.phase_plus, -self.phases.phase_minus):
                raise ParameterError("no-reference design needs phase_plus == -phase_minus")
        if not self.predicted_j >= 0:
            raise ParameterError("predicted_j must be nonnegative")


def _is_degenerate_eta(eta: float) -> bool:
    return abs(2.0 * eta + 1.0) <= 1e-15


def optimal_no_carrier(p: CntParams, incoming: WaveSpec, eta: float) -> DesignChoice:
    """Receiver without a carrier; phases half a turn apart, ``phase_plus = 0``.

    ``eta`` scales the reference wave and is left to the caller; the distance
    grows with ``|2 eta + 1|`` without bound.
    """
    if _is_degenerate_eta(eta):
        raise ParameterError("eta = -1/2 cancels the constellation distance")
    pair = PhasePair(0.0, math.pi)
    return DesignChoice(
        Variant.NO_CARRIER,
        ReferenceDesign.linear_combination(eta),
        CarrierSpec.constant_one(incoming.angular_frequency),
        pair,
        j_closed_form_no_carrier(p, pair, eta, incoming.amplitude, incoming.angular_frequency),
    )


def optimal_no_reference(p: CntParams, incoming: WaveSpec) -> DesignChoice:
    """Receiver without a reference wave; phases at -+pi/4, carrier phase twice the lag."""
    omega = incoming.angular_frequency
    theta_c = 2.0 * theta_ss(p, omega)
    return DesignChoice(
        Variant.NO_REFERENCE,
        ReferenceDesign.none(),
        CarrierSpec.double_frequency(theta_c, omega),
        PhasePair(-math.pi / 4, math.pi / 4),
        j_closed_form_no_reference(p, math.pi / 4, theta_c, incoming.amplitude, omega),
    )


def circular_distance(a: float, b: float, period: float = TWO_PI) -> float:
    return abs(math.remainder(a - b, period))


@dataclass
class OptimalityReport:
    """Outcome of a grid sweep.

    ``values`` is 1-D over ``axes[0]`` for the no-carrier receiver and 2-D
    (``theta_minus`` x ``theta_c``) for the no-reference receiver.
    """

    variant: Variant
    axis_names: tuple[str, ...]
    axes: tuple[np.ndarray, ...]
    values: np.ndarray
    argmax: tuple[float, ...]
    expected: tuple[float, ...]
    cells: tuple[float, ...]
    deviations: tuple[float, ...]
    predicted_j: float
    flat: bool
    j_numeric_at_argmax: float | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def grid_max(self) -> float:
        return float(np.max(self.values))

    @property
    def passed(self) -> bool:
        return not self.flat and all(d <= c * (1 + 1e-9) for d, c in zip(self.deviations, self.cells))

    def rows(self):
        """``(grid point..., J)`` tuples in grid order."""
        if self.values.ndim == 1:
            for x, j in zip(self.axes[0], self.values):
                yield (float(x), float(j))
        else:
            for i, x in enumerate(self.axes[0]):
                for k, y in enumerate(self.axes[1]):
                    yield (float(x), float(y), float(self.values[i, k]))


def _is_flat(values: np.ndarray) -> bool:
    top = float(np.max(np.abs(values)))
    return float(np.ptp(values)) <= 1e-12 * max(1.0, top)


def verify_optimality(
    variant: Variant | str,
    p: CntParams,
    incoming: WaveSpec = WaveSpec(1.0, 1.0),
    resolution: int = 64,
    *,
    eta: float = 0.0,
    numeric_periods: int | None = None,
    steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
    strict: bool = True,
) -> OptimalityReport:
    """Sweep the free angles with ``j_ss_quadrature`` and compare the argmax to the closed-form optimum.

    No-carrier: ``phase_minus - phase_plus`` over ``[0, 2 pi)``. No-reference:
    ``theta_minus`` over ``(0, pi/2]`` and ``theta_c`` over ``[0, 2 pi)``.
    The no-reference index depends on ``theta_c`` through ``|cos(theta_c - 2 theta_ss)|``,
    which repeats every pi, so the carrier phase is compared modulo pi.

    A flat sweep (``eta = -1/2``) is reported, not raised. Otherwise a miss by
    more than one grid cell raises ``OptimalityError`` when ``strict``.
    ``numeric_periods`` adds a full-simulation value at the argmax.
    """
    variant = Variant(variant)
    if resolution < MIN_RESOLUTION:
        raise ParameterError(f"resolution must be at least {MIN_RESOLUTION}")
    omega = incoming.angular_frequency
    notes = []

    if variant is Variant.NO_CARRIER:
        deltas = np.arange(resolution) * (TWO_PI / resolution)
        design = ReferenceDesign.linear_combination(eta)
        carrier = CarrierSpec.constant_one(omega)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegeneratePhaseWarning)
            values = np.array(
                [j_ss_quadrature(p, incoming, PhasePair(0.0, float(d)), design, carrier) for d in deltas]
            )
        i = int(np.argmax(values))
        argmax = (float(deltas[i]),)
        expected = (math.pi,)
        cells = (TWO_PI / resolution,)
        deviations = (circular_distance(argmax[0], expected[0]),)
        predicted = j_closed_form_no_carrier(p, PhasePair(0.0, math.pi), eta, incoming.amplitude, omega)
        axis_names, axes = ("delta_theta",), (deltas,)
        best_pair, best_design, best_carrier = PhasePair(0.0, argmax[0]), design, carrier
    else:
        thetas = (np.arange(resolution) + 1) * (0.5 * math.pi / resolution)
        carrier_phases = np.arange(resolution) * (TWO_PI / resolution)
        design = ReferenceDesign.none()
        values = np.empty((resolution, resolution))
        for a, tm in enumerate(thetas):
            pair = PhasePair(-float(tm), float(tm))
            for b, tc in enumerate(carrier_phases):
                values[a, b] = j_ss_quadrature(
                    p, incoming, pair, design, CarrierSpec.double_frequency(float(tc), omega)
                )
        a, b = np.unravel_index(int(np.argmax(values)), values.shape)
        argmax = (float(thetas[a]), float(carrier_phases[b]))
        expected = (math.pi / 4, 2.0 * theta_ss(p, omega))
        cells = (0.5 * math.pi / resolution, TWO_PI / resolution)
        deviations = (
            abs(argmax[0] - expected[0]),
            circular_distance(argmax[1], expected[1], period=math.pi),
        )
        if circular_distance(argmax[1], expected[1]) > cells[1] * (1 + 1e-9):
            notes.append("carrier-phase argmax found on the equivalent branch theta_c = 2 theta_ss + pi")
        predicted = j_closed_form_no_reference(p, math.pi / 4, expected[1], incoming.amplitude, omega)
        axis_names, axes = ("theta_minus", "theta_c"), (thetas, carrier_phases)
        best_pair = PhasePair(-argmax[0], argmax[0])
        best_design, best_carrier = design, CarrierSpec.double_frequency(argmax[1], omega)

    flat = _is_flat(values)
    if flat:
        notes.append("flat objective")

    jn = None
    if numeric_periods is not None and not flat:
        T = symbol_duration(omega, numeric_periods)
        jn = j_numeric(p, incoming, best_pair, best_design, best_carrier, T, steps_per_period)

    report = OptimalityReport(
        variant, axis_names, axes, values, argmax, expected, cells, deviations,
        predicted, flat, jn, notes,
    )
    if strict and not flat and not report.passed:
        raise OptimalityError(
            f"{variant.value}: grid argmax {argmax} misses the analytic optimum {expected} "
            f"(deviation {deviations}, cell {cells})"
        )
    return report


def predicted_scale(p: CntParams, incoming: WaveSpec) -> float:
    """``|I1| * A_tilde**2``, the common factor of both closed forms."""
    a = mag_coef(p, incoming.amplitude, incoming.angular_frequency)
    return abs(p.current_gain) * a * a
