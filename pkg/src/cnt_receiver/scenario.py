"""Scenario configuration and the batch runners behind the command line.

Config files are INI with five sections; every key is optional::

    [model]     mass viscosity elasticity charge current_offset current_gain
    [incoming]  amplitude angular_frequency
    [design]    variant eta phase_plus phase_minus carrier_phase
    [noise]     sigma seed mode
    [run]       period_count steps_per_period trials sigmas margins
                sweep_axis sweep_values sweep_points numeric

Unknown sections or keys are rejected. ``margins`` lists noise levels as
``J / (2 * sigma_n)`` instead of raw ``sigma``.
"""

from __future__ import annotations

import configparser
import csv
import dataclasses
import io
import json
import math
import re
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import binomtest, norm

from . import rng
from .design import Variant
from .dynamics import DEFAULT_STEPS_PER_PERIOD
from .estimator import PhaseReceiver
from .metrics import closed_form, j_numeric, j_ss_quadrature, performance_report
from .model import CntParams, ParameterError, symbol_duration
from .receiver import (
    NoiseMode,
    NoiseSpec,
    Symbol,
    demodulate,
    detect,
    detect_statistics,
    noise_samples,
    simulate_symbol,
)
from .signals import ReferenceDesign

SWEEP_AXES = ("delta_theta", "theta_minus", "theta_c", "eta", "s", "sigma")
DEFAULT_MARGINS = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0)


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


@dataclass(frozen=True)
class ScenarioConfig:
    params: CntParams = CntParams()
    amplitude: float = 1.0
    angular_frequency: float = 1.0
    variant: str = "no_carrier"
    eta: float = 0.0
    phase_plus: float | None = None
    phase_minus: float | None = None
    carrier_phase: float | None = None
    sigma: float = 0.0
    seed: int = 0
    noise_mode: str = "gaussian"
    period_count: int = 200
    steps_per_period: int = DEFAULT_STEPS_PER_PERIOD
    trials: int = 10_000
    sigmas: tuple[float, ...] | None = None
    margins: tuple[float, ...] | None = None
    sweep_axis: str = "delta_theta"
    sweep_values: tuple[float, ...] | None = None
    sweep_points: int = 64
    numeric: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("run.trials: must be at least 1")
        if self.sigmas is not None and self.margins is not None:
            raise ConfigError("run.sigmas and run.margins are mutually exclusive")
        if self.sweep_axis not in SWEEP_AXES:
            raise ConfigError(f"run.sweep_axis: unknown axis {self.sweep_axis!r}; expected one of {SWEEP_AXES}")
        if self.sweep_points < 1:
            raise ConfigError("run.sweep_points: must be at least 1")
        try:
            Variant(self.variant)
        except ValueError:
            raise ConfigError(f"design.variant: unknown variant {self.variant!r}") from None
        try:
            NoiseMode(self.noise_mode)
        except ValueError:
            raise ConfigError(f"noise.mode: unknown mode {self.noise_mode!r}") from None
        try:
            symbol_duration(self.angular_frequency, self.period_count)
            NoiseSpec(self.sigma, self.seed)
        except ParameterError as exc:
            raise ConfigError(f"{self._field_of(exc)}: {exc}") from None

    @staticmethod
    def _field_of(exc: Exception) -> str:
        msg = str(exc)
        if "period count" in msg or "period_count" in msg:
            return "run.period_count"
        if "omega" in msg or "angular_frequency" in msg:
            return "incoming.angular_frequency"
        if "sigma" in msg:
            return "noise.sigma"
        if "seed" in msg:
            return "noise.seed"
        return "config"

    def receiver(self, **overrides) -> PhaseReceiver:
        kw = dict(
            params=self.params,
            amplitude=self.amplitude,
            angular_frequency=self.angular_frequency,
            variant=self.variant,
            eta=self.eta,
            phase_plus=self.phase_plus,
            phase_minus=self.phase_minus,
            carrier_phase=self.carrier_phase,
            period_count=self.period_count,
            steps_per_period=self.steps_per_period,
            sigma=self.sigma,
            seed=self.seed,
            noise_mode=self.noise_mode,
        )
        kw.update(overrides)
        return PhaseReceiver(**kw)

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in re.split(r"[,\s]+", text.strip()) if v)


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


_MODEL_KEYS = ("mass", "viscosity", "elasticity", "charge", "current_offset", "current_gain")
_SCHEMA = {
    "model": {k: float for k in _MODEL_KEYS},
    "incoming": {"amplitude": float, "angular_frequency": float},
    "design": {
        "variant": str,
        "eta": float,
        "phase_plus": float,
        "phase_minus": float,
        "carrier_phase": float,
    },
    "noise": {"sigma": float, "seed": int, "mode": str},
    "run": {
        "period_count": int,
        "steps_per_period": int,
        "trials": int,
        "sigmas": _floats,
        "margins": _floats,
        "sweep_axis": str,
        "sweep_values": _floats,
        "sweep_points": int,
        "numeric": _bool,
    },
}
_RENAME = {("noise", "mode"): "noise_mode"}


def _line_of(text: str, section: str, key: str) -> int | None:
    current = None
    for n, line in enumerate(text.splitlines(), 1):
        m = re.match(r"\s*\[([^\]]+)\]", line)
        if m:
            current = m.group(1).strip()
        elif current == section and re.match(rf"\s*{re.escape(key)}\s*[=:]", line):
            return n
    return None


def parse_config(text: str) -> ScenarioConfig:
    parser = configparser.ConfigParser(interpolation=None, default_section="__defaults__", inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None

    model, other = {}, {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key, raw in parser.items(section):
            where = f"{section}.{key}"
            line = _line_of(text, section, key)
            if line is not None:
                where += f" (line {line})"
            conv = _SCHEMA[section].get(key)
            if conv is None:
                raise ConfigError(f"{where}: unknown key")
            try:
                value = conv(raw)
            except ValueError as exc:
                raise ConfigError(f"{where}: {exc}") from None
            if section == "model":
                model[key] = value
            else:
                other[_RENAME.get((section, key), key)] = value
    try:
        params = CntParams(**model)
    except ParameterError as exc:
        raise ConfigError(f"model: {exc}") from None
    return ScenarioConfig(params=params, **other)


def load_config(path) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def dump_config(cfg: ScenarioConfig) -> str:
    """Resolved configuration as INI text (round-trips through ``parse_config``)."""
    out = io.StringIO()
    sections = {
        "model": {k: getattr(cfg.params, k) for k in _MODEL_KEYS},
        "incoming": {"amplitude": cfg.amplitude, "angular_frequency": cfg.angular_frequency},
        "design": {
            "variant": cfg.variant,
            "eta": cfg.eta,
            "phase_plus": cfg.phase_plus,
            "phase_minus": cfg.phase_minus,
            "carrier_phase": cfg.carrier_phase,
        },
        "noise": {"sigma": cfg.sigma, "seed": cfg.seed, "mode": cfg.noise_mode},
        "run": {
            "period_count": cfg.period_count,
            "steps_per_period": cfg.steps_per_period,
            "trials": cfg.trials,
            "sigmas": cfg.sigmas,
            "margins": cfg.margins,
            "sweep_axis": cfg.sweep_axis,
            "sweep_values": cfg.sweep_values,
            "sweep_points": cfg.sweep_points,
            "numeric": cfg.numeric,
        },
    }
    for name, items in sections.items():
        out.write(f"[{name}]\n")
        for k, v in items.items():
            if v is None:
                continue
            if isinstance(v, tuple):
                v = ", ".join(fmt(x) for x in v)
            out.write(f"{k} = {fmt(v)}\n")
        out.write("\n")
    return out.getvalue()


def fmt(value) -> str:
    """Shortest round-trip text for CSV cells."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if value is None:
        return ""
    return str(value)


@dataclass
class Table:
    columns: list[str]
    rows: list[list] = field(default_factory=list)

    def to_csv(self, comment: str) -> str:
        out = io.StringIO()
        out.write(f"# {comment}\n")
        w = csv.writer(out, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([fmt(v) for v in row])
        return out.getvalue()


def config_comment(command: str, cfg: ScenarioConfig) -> str:
    return f"command={command} seed={cfg.seed} config=" + json.dumps(cfg.as_dict(), sort_keys=True)


def _scenario(cfg: ScenarioConfig):
    return cfg.receiver().resolve()


def run_single(cfg: ScenarioConfig, trajectory_out: list | None = None) -> Table:
    """Noiseless performance figures plus one noisy symbol of each kind.

    Columns: ``quantity, value``. When ``trajectory_out`` is a list, the
    PLUS-symbol trajectory is appended to it.
    """
    p, incoming, pair, reference, carrier, T, noise = _scenario(cfg)
    report = performance_report(p, incoming, pair, reference, carrier, T, cfg.steps_per_period)
    rx = cfg.receiver().fit()
    table = Table(["quantity", "value"])
    table.rows += [
        ["j_numeric", report.j_numeric],
        ["j_ss_quadrature", report.j_ss_quadrature],
        ["j_closed_form", report.j_closed_form],
        ["mag_coef", report.mag_coef],
        ["theta_ss", report.theta_ss],
        ["d0_plus", rx.context_.d_plus_ref],
        ["d0_minus", rx.context_.d_minus_ref],
    ]
    for idx, sym in enumerate((Symbol.PLUS, Symbol.MINUS)):
        traj = simulate_symbol(p, incoming, pair, reference, sym, T, cfg.steps_per_period)
        if trajectory_out is not None and sym is Symbol.PLUS:
            trajectory_out.append(traj)
        res = demodulate(p, traj, carrier, noise, T=T, index=idx)
        name = sym.name.lower()
        table.rows += [
            [f"noise_{name}", res.noise_sample],
            [f"statistic_{name}", res.statistic],
            [f"detected_{name}", int(detect(res, rx.context_))],
        ]
    return table


def trajectory_table(traj) -> Table:
    t = Table(["t", "x", "v"])
    t.rows = [[a, b, c] for a, b, c in zip(traj.times.tolist(), traj.displacement.tolist(), traj.velocity.tolist())]
    return t


def wilson_interval(errors: int, trials: int) -> tuple[float, float]:
    ci = binomtest(int(errors), int(trials)).proportion_ci(confidence_level=0.95, method="wilson")
    return float(ci.low), float(ci.high)


BER_COLUMNS = ["sigma", "noise_std", "margin", "trials", "errors", "ber", "ci_low", "ci_high", "ber_gaussian"]


def ber_rows(rx: PhaseReceiver, sigmas, trials: int, seed: int) -> list[list]:
    """Monte Carlo error counts for a fitted receiver at each noise level.

    Symbols come from the symbol stream and the noise from the noise stream of
    ``seed``; the same draws are reused for every ``sigma``.
    """
    T = rx.duration_
    symbols = np.where(rng.bits(seed, rng.SYMBOL_STREAM, 0, trials) == 1, int(Symbol.PLUS), int(Symbol.MINUS))
    ctx = rx.context_
    d0 = np.where(symbols == int(Symbol.PLUS), ctx.d_plus_ref, ctx.d_minus_ref)
    rows = []
    for sigma in sigmas:
        noise = NoiseSpec(float(sigma), seed, rx.noise_mode)
        stats = d0 + noise_samples(noise, rx.carrier_, T, 0, trials)
        errors = int(np.count_nonzero(detect_statistics(stats, ctx) != symbols))
        noise_std = float(sigma) / math.sqrt(T.duration)
        margin = math.inf if noise_std == 0 else ctx.separation / (2.0 * noise_std)
        lo, hi = wilson_interval(errors, trials)
        rows.append([float(sigma), noise_std, margin, trials, errors, errors / trials, lo, hi, float(norm.sf(margin))])
    return rows


def noise_levels(cfg: ScenarioConfig, separation: float, duration: float) -> tuple[float, ...]:
    if cfg.sigmas is not None:
        return cfg.sigmas
    margins = cfg.margins if cfg.margins is not None else DEFAULT_MARGINS
    return tuple(separation * math.sqrt(duration) / (2.0 * m) for m in margins)


def run_ber(cfg: ScenarioConfig) -> Table:
    rx = cfg.receiver().fit()
    sigmas = noise_levels(cfg, rx.separation_, rx.duration_.duration)
    return Table(list(BER_COLUMNS), ber_rows(rx, sigmas, cfg.trials, cfg.seed))


def _axis_values(cfg: ScenarioConfig) -> tuple:
    if cfg.sweep_values is not None:
        return cfg.sweep_values
    n = cfg.sweep_points
    axis = cfg.sweep_axis
    if axis in ("delta_theta", "theta_c"):
        return tuple(2.0 * math.pi * i / n for i in range(n))
    if axis == "theta_minus":
        return tuple(0.5 * math.pi * (i + 1) / n for i in range(n))
    if axis == "eta":
        return tuple(np.linspace(-2.0, 1.0, n).tolist())
    if axis == "s":
        return (10.0, 50.0, 200.0)
    return ()


def run_sweep(cfg: ScenarioConfig) -> Table:
    """One row per grid point of ``cfg.sweep_axis``.

    Angle and ``eta`` axes report ``j_ss_quadrature`` and the applicable closed
    form (plus ``j_numeric`` when ``numeric`` is set); the ``s`` axis adds the
    gap between the full simulation and the steady state; the ``sigma`` axis
    delegates to the BER runner.
    """
    axis = cfg.sweep_axis
    if axis == "sigma":
        table = run_ber(cfg if cfg.sweep_values is None else dataclasses.replace(cfg, sigmas=cfg.sweep_values, margins=None))
        return table

    values = _axis_values(cfg)
    if axis == "s":
        p, incoming, pair, reference, carrier, _, _ = _scenario(cfg)
        jss = j_ss_quadrature(p, incoming, pair, reference, carrier)
        table = Table(["s", "j_numeric", "j_ss_quadrature", "j_closed_form", "abs_gap", "rel_gap"])
        for s in values:
            if int(s) != s:
                raise ConfigError("run.sweep_values: period counts must be integers")
            T = symbol_duration(incoming.angular_frequency, int(s))
            jn = j_numeric(p, incoming, pair, reference, carrier, T, cfg.steps_per_period)
            table.rows.append([int(s), jn, jss, closed_form(p, incoming, pair, reference, carrier), abs(jn - jss), abs(jn - jss) / jss])
        return table

    columns = [axis, "j_ss_quadrature", "j_closed_form"] + (["j_numeric"] if cfg.numeric else [])
    table = Table(columns)
    for v in values:
        if axis == "delta_theta":
            point = dataclasses.replace(cfg, variant="no_carrier", phase_plus=0.0, phase_minus=v)
        elif axis == "eta":
            point = dataclasses.replace(cfg, variant="no_carrier", eta=v)
        elif axis == "theta_minus":
            point = dataclasses.replace(cfg, variant="no_reference", phase_plus=-v, phase_minus=v)
        else:
            point = dataclasses.replace(cfg, variant="no_reference", carrier_phase=v)
        p, incoming, pair, reference, carrier, T, _ = _scenario_lenient(point)
        row = [v, j_ss_quadrature(p, incoming, pair, reference, carrier), closed_form(p, incoming, pair, reference, carrier)]
        if cfg.numeric:
            row.append(j_numeric(p, incoming, pair, reference, carrier, T, cfg.steps_per_period))
        table.rows.append(row)
    return table


def _scenario_lenient(cfg: ScenarioConfig):
    """Like ``_scenario`` but allows the degenerate ``eta = -1/2`` grid point."""
    if cfg.variant == "no_carrier" and abs(2.0 * cfg.eta + 1.0) <= 1e-15:
        p, incoming, pair, _, carrier, T, noise = _scenario(dataclasses.replace(cfg, eta=0.0))
        return p, incoming, pair, ReferenceDesign.linear_combination(cfg.eta), carrier, T, noise
    return _scenario(cfg)
