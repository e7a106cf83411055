"""Simulation and design checks for a carbon-nanotube cantilever phase receiver."""

from .design import DesignChoice, Variant, optimal_no_carrier, optimal_no_reference, verify_optimality
from .estimator import PhaseReceiver
from .metrics import (
    j_closed_form_no_carrier,
    j_closed_form_no_reference,
    j_numeric,
    j_ss_quadrature,
    mag_coef,
    theta_ss,
)
from .model import CntParams, ParameterError, PhasePair, SymbolDuration, WaveSpec, symbol_duration
from .receiver import DecisionContext, DemodResult, NoiseSpec, Symbol, calibrate, demodulate, detect
from .signals import CarrierSpec, ReferenceDesign

__all__ = [
    "CarrierSpec",
    "CntParams",
    "DecisionContext",
    "DemodResult",
    "DesignChoice",
    "NoiseSpec",
    "ParameterError",
    "PhasePair",
    "PhaseReceiver",
    "ReferenceDesign",
    "Symbol",
    "SymbolDuration",
    "Variant",
    "WaveSpec",
    "calibrate",
    "demodulate",
    "detect",
    "j_closed_form_no_carrier",
    "j_closed_form_no_reference",
    "j_numeric",
    "j_ss_quadrature",
    "mag_coef",
    "optimal_no_carrier",
    "optimal_no_reference",
    "symbol_duration",
    "theta_ss",
    "verify_optimality",
]
