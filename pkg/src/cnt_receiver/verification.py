"""Executable acceptance checks, shared by ``cnt-receiver verify`` and the test suite.

Each check returns a ``CriterionResult``; none of them raise on failure.
Tolerances are fixed constants below.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass

import numpy as np

from .design import Variant, optimal_no_carrier, optimal_no_reference, verify_optimality
from .dynamics import integrate_motion, steady_state_response, wave_forcing
from .metrics import (
    j_closed_form_no_carrier,
    j_closed_form_no_reference,
    j_numeric,
    j_ss_quadrature,
    theta_ss,
)
from .model import CntParams, DegeneratePhaseWarning, PhasePair, WaveSpec, symbol_duration
from .receiver import NoiseMode, NoiseSpec, noise_samples
from .signals import CarrierSpec, ReferenceDesign, carrier_norm

CLOSED_FORM_RTOL = 1e-8
PIPELINE_RTOL = 1e-3
PIPELINE_PERIODS = 200
PIPELINE_STEPS = 1000
CONVERGENCE_PERIODS = (10, 50, 200)
NORM_ATOL = 1e-9
VARIANCE_RTOL = 0.05
VARIANCE_DRAWS = 10_000
DEGENERATE_ATOL = 1e-10
ORDER_RATIO = (12.0, 20.0)
LINEARITY_ATOL = 1e-9
BER_TRIALS = 100_000
BER_MARGIN = 2.0

NO_CARRIER_ETAS = (-2.0, -1.0, 0.0, 0.5, 1.0)
NO_CARRIER_DELTAS = (math.pi / 4, math.pi / 2, math.pi, 3 * math.pi / 2)
NO_REFERENCE_THETAS = (math.pi / 8, math.pi / 4, 3 * math.pi / 8)
NO_REFERENCE_OFFSETS = (0.0, math.pi / 4, -math.pi / 4)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number}. {self.name}: {self.detail} ({self.seconds:.2f} s)"


def _defaults():
    return CntParams(), WaveSpec(1.0, 1.0)


def _timed(number, name, budget, body):
    start = time.perf_counter()
    passed, detail = body()
    seconds = time.perf_counter() - start
    if budget is not None and seconds >= budget:
        passed = False
        detail += f"; runtime {seconds:.2f} s exceeds {budget} s"
    return CriterionResult(number, name, bool(passed), detail, seconds)


def no_carrier_grid_gaps(p: CntParams, incoming: WaveSpec) -> list[float]:
    carrier = CarrierSpec.constant_one(incoming.angular_frequency)
    gaps = []
    for eta in NO_CARRIER_ETAS:
        design = ReferenceDesign.linear_combination(eta)
        for delta in NO_CARRIER_DELTAS:
            pair = PhasePair(0.0, delta)
            cf = j_closed_form_no_carrier(p, pair, eta, incoming.amplitude, incoming.angular_frequency)
            q = j_ss_quadrature(p, incoming, pair, design, carrier)
            gaps.append(abs(cf - q) / max(cf, 1e-12))
    return gaps


def no_reference_grid_gaps(p: CntParams, incoming: WaveSpec) -> list[float]:
    omega = incoming.angular_frequency
    base = 2.0 * theta_ss(p, omega)
    gaps = []
    for tm in NO_REFERENCE_THETAS:
        pair = PhasePair(-tm, tm)
        for off in NO_REFERENCE_OFFSETS:
            tc = base + off
            cf = j_closed_form_no_reference(p, tm, tc, incoming.amplitude, omega)
            q = j_ss_quadrature(p, incoming, pair, ReferenceDesign.none(), CarrierSpec.double_frequency(tc, omega))
            gaps.append(abs(cf - q) / max(cf, 1e-12))
    return gaps


def criterion_1() -> CriterionResult:
    def body():
        worst = max(no_carrier_grid_gaps(*_defaults()))
        return worst < CLOSED_FORM_RTOL, f"max relative gap {worst:.3e} (< {CLOSED_FORM_RTOL:g})"

    return _timed(1, "no-carrier closed form vs steady-state quadrature", 1.0, body)


def criterion_2() -> CriterionResult:
    def body():
        worst = max(no_reference_grid_gaps(*_defaults()))
        return worst < CLOSED_FORM_RTOL, f"max relative gap {worst:.3e} (< {CLOSED_FORM_RTOL:g})"

    return _timed(2, "no-reference closed form vs steady-state quadrature", 1.0, body)


def optimal_designs(p: CntParams, incoming: WaveSpec):
    return {
        "no_carrier": optimal_no_carrier(p, incoming, 0.0),
        "no_reference": optimal_no_reference(p, incoming),
    }


def pipeline_gaps(periods: int, steps_per_period: int = PIPELINE_STEPS) -> dict[str, tuple[float, float, float]]:
    """``name -> (j_numeric, j_closed_form, relative gap)`` for both optimal designs."""
    p, incoming = _defaults()
    T = symbol_duration(incoming.angular_frequency, periods)
    out = {}
    for name, choice in optimal_designs(p, incoming).items():
        jn = j_numeric(p, incoming, choice.phases, choice.reference, choice.carrier, T, steps_per_period)
        out[name] = (jn, choice.predicted_j, abs(jn - choice.predicted_j) / choice.predicted_j)
    return out


def criterion_3() -> CriterionResult:
    def body():
        gaps = pipeline_gaps(PIPELINE_PERIODS)
        ok = all(g[2] < PIPELINE_RTOL for g in gaps.values())
        detail = ", ".join(f"{k}: J={v[0]:.6g} vs {v[1]:.6g} rel {v[2]:.3e}" for k, v in gaps.items())
        return ok, detail + f" (< {PIPELINE_RTOL:g} at s={PIPELINE_PERIODS})"

    return _timed(3, "full pipeline vs closed form", 30.0, body)


def criterion_4() -> CriterionResult:
    def body():
        p, incoming = _defaults()
        ok = True
        parts = []
        for name, choice in optimal_designs(p, incoming).items():
            jss = j_ss_quadrature(p, incoming, choice.phases, choice.reference, choice.carrier)
            rel = []
            for s in CONVERGENCE_PERIODS:
                T = symbol_duration(incoming.angular_frequency, s)
                jn = j_numeric(p, incoming, choice.phases, choice.reference, choice.carrier, T, PIPELINE_STEPS)
                rel.append(abs(jn - jss) / jss)
            decreasing = all(a > b for a, b in zip(rel, rel[1:]))
            ok &= decreasing and rel[-1] < PIPELINE_RTOL
            parts.append(f"{name}: " + " > ".join(f"{r:.3e}" for r in rel) + ("" if decreasing else " (not decreasing)"))
        return ok, "; ".join(parts) + f" (last < {PIPELINE_RTOL:g})"

    return _timed(4, "steady-state approximation over s = 10, 50, 200", None, body)


def criterion_5() -> CriterionResult:
    def body():
        p, incoming = _defaults()
        r1 = verify_optimality(Variant.NO_CARRIER, p, incoming, 64, strict=False)
        r2 = verify_optimality(Variant.NO_REFERENCE, p, incoming, 64, strict=False)
        detail = (
            f"no_carrier argmax {r1.argmax[0]:.6f} (expect {r1.expected[0]:.6f}); "
            f"no_reference argmax ({r2.argmax[0]:.6f}, {r2.argmax[1]:.6f}) "
            f"(expect ({r2.expected[0]:.6f}, {r2.expected[1]:.6f}) with theta_c mod pi)"
        )
        return r1.passed and r2.passed, detail

    return _timed(5, "grid-search optimality", 10.0, body)


def empirical_noise_variance(c: CarrierSpec, T, mode: NoiseMode, seed: int = 7, draws: int = VARIANCE_DRAWS) -> float:
    n = noise_samples(NoiseSpec(1.0, seed, mode), c, T, 0, draws)
    return float(np.var(n, ddof=1))


def criterion_6() -> CriterionResult:
    def body():
        p, incoming = _defaults()
        omega = incoming.angular_frequency
        carriers = [CarrierSpec.constant_one(omega), CarrierSpec.double_frequency(0.7, omega)]
        worst_norm = 0.0
        for c in carriers:
            for s in (1, 4, 16):
                worst_norm = max(worst_norm, abs(carrier_norm(c, symbol_duration(omega, s)) - 1.0))
        T = symbol_duration(omega, 1)
        target = 1.0 / T.duration
        worst_var = 0.0
        for c in carriers:
            for mode in (NoiseMode.GAUSSIAN, NoiseMode.PATH):
                worst_var = max(worst_var, abs(empirical_noise_variance(c, T, mode) / target - 1.0))
        ok = worst_norm < NORM_ATOL and worst_var < VARIANCE_RTOL
        return ok, f"max |norm - 1| {worst_norm:.3e}; max variance deviation {worst_var:.3%} (< 5%)"

    return _timed(6, "carrier constraint and noise variance", None, body)


def degenerate_values() -> dict[str, float]:
    p, incoming = _defaults()
    omega = incoming.angular_frequency
    th = theta_ss(p, omega)
    one = CarrierSpec.constant_one(omega)
    T = symbol_duration(omega, 10)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegeneratePhaseWarning)
        same = PhasePair(0.4, 0.4)
        zero = PhasePair(-0.0, 0.0)
    lc0 = ReferenceDesign.linear_combination(0.0)
    half = ReferenceDesign.linear_combination(-0.5)
    opp = PhasePair(0.0, math.pi)
    df_orth = CarrierSpec.double_frequency(2 * th + math.pi / 2, omega)
    df_opt = CarrierSpec.double_frequency(2 * th, omega)
    none = ReferenceDesign.none()
    return {
        "equal phases (j_ss)": j_ss_quadrature(p, incoming, same, lc0, one),
        "equal phases (j_numeric)": j_numeric(p, incoming, same, lc0, one, T),
        "eta=-1/2 (j_ss)": j_ss_quadrature(p, incoming, opp, half, one),
        "eta=-1/2 (j_numeric)": j_numeric(p, incoming, opp, half, one, T),
        "theta_c-2theta_ss=pi/2 (j_ss)": j_ss_quadrature(p, incoming, PhasePair(-math.pi / 4, math.pi / 4), none, df_orth),
        "theta_minus=0 (j_ss)": j_ss_quadrature(p, incoming, zero, none, df_opt),
        "theta_minus=0 (j_numeric)": j_numeric(p, incoming, zero, none, df_opt, T),
    }


def criterion_7() -> CriterionResult:
    def body():
        vals = degenerate_values()
        worst = max(vals.values())
        return worst < DEGENERATE_ATOL, f"max J over {len(vals)} degenerate cases {worst:.3e} (< {DEGENERATE_ATOL:g})"

    return _timed(7, "degenerate designs give zero distance", None, body)


def rk4_error(steps_per_period: int, periods: int = 150) -> float:
    """Max error over the last period against the analytic steady state (defaults, unit drive)."""
    p, incoming = _defaults()
    T = symbol_duration(incoming.angular_frequency, periods)
    traj = integrate_motion(p, wave_forcing(p, incoming), T, steps_per_period=steps_per_period)
    last = traj.times >= T.duration - T.period
    exact = steady_state_response(p, incoming)(traj.times[last])
    return float(np.max(np.abs(traj.displacement[last] - exact)))


def linearity_gap(steps_per_period: int = 1000, periods: int = 5) -> float:
    p, incoming = _defaults()
    T = symbol_duration(incoming.angular_frequency, periods)
    f1 = wave_forcing(p, incoming.with_phase(0.3))
    f2 = wave_forcing(p, WaveSpec(0.7, 1.3, -1.1))
    both = integrate_motion(p, lambda t: f1(t) + f2(t), T, x0=0.5, v0=-0.2, steps_per_period=steps_per_period)
    a = integrate_motion(p, f1, T, x0=0.5, v0=-0.2, steps_per_period=steps_per_period)
    b = integrate_motion(p, f2, T, steps_per_period=steps_per_period)
    return float(np.max(np.abs(both.displacement - a.displacement - b.displacement)))


def criterion_8() -> CriterionResult:
    def body():
        e1, e2 = rk4_error(200), rk4_error(400)
        ratio = e1 / e2
        lin = linearity_gap()
        ok = ORDER_RATIO[0] <= ratio <= ORDER_RATIO[1] and lin < LINEARITY_ATOL
        return ok, f"step-halving ratio {ratio:.3f} (in [12, 20]); linearity gap {lin:.3e} (< {LINEARITY_ATOL:g})"

    return _timed(8, "RK4 order and linearity", None, body)


def criterion_9() -> CriterionResult:
    from scipy.stats import norm

    from .scenario import ScenarioConfig, run_ber

    def body():
        cfg = ScenarioConfig(variant="no_carrier", period_count=PIPELINE_PERIODS, trials=BER_TRIALS, seed=2024,
                             margins=(BER_MARGIN,))
        table = run_ber(cfg)
        row = dict(zip(table.columns, table.rows[0]))
        q = float(norm.sf(BER_MARGIN))
        in_ci = row["ci_low"] <= q <= row["ci_high"]

        zero = run_ber(ScenarioConfig(period_count=PIPELINE_PERIODS, trials=10_000, seed=5, sigmas=(0.0,)))
        ber0 = zero.rows[0][5]

        sweep = ScenarioConfig(period_count=PIPELINE_PERIODS, trials=20_000, seed=99)
        a = run_ber(sweep).to_csv("repro")
        b = run_ber(sweep).to_csv("repro")
        ok = ber0 == 0 and in_ci and a == b
        detail = (
            f"BER(sigma=0)={ber0}; BER at margin 2 = {row['ber']:.5f}, Wilson 95% "
            f"[{row['ci_low']:.5f}, {row['ci_high']:.5f}] vs Q(2)={q:.5f}; reproducible={a == b}"
        )
        return ok, detail

    return _timed(9, "detection and BER", 60.0, body)


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9)


def run_all() -> list[CriterionResult]:
    return [c() for c in CRITERIA]
