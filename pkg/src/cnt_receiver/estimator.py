"""scikit-learn compatible front end for the simulated receiver.

``fit`` calibrates the two reference statistics by running the noiseless
pipeline; ``transmit`` produces noisy statistics for a sequence of symbols;
``predict`` maps statistics to symbols (+1 / -1). Because it is a regular
estimator, ``get_params``/``set_params``/``clone`` work as usual.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .design import Variant, optimal_no_carrier, optimal_no_reference
from .dynamics import DEFAULT_STEPS_PER_PERIOD
from .model import CntParams, PhasePair, WaveSpec, symbol_duration
from .receiver import NoiseSpec, Symbol, calibrate, detect_statistics, noise_samples
from .signals import CarrierSpec


class PhaseReceiver(ClassifierMixin, BaseEstimator):
    """Binary phase receiver built from one of the two simplified designs.

    Parameters
    ----------
    params : CntParams or None
        Cantilever constants; ``None`` means the normalized defaults.
    amplitude, angular_frequency : float
        Incoming wave amplitude and angular frequency.
    variant : {"no_carrier", "no_reference"}
    eta : float
        Reference-wave coefficient of the no-carrier design.
    phase_plus, phase_minus, carrier_phase : float or None
        Overrides of the optimal settings chosen by the design.
    period_count, steps_per_period : int
        Symbol length in periods and RK4 resolution.
    sigma, seed, noise_mode
        Demodulator noise, see ``NoiseSpec``.
    """

    def __init__(
        self,
        params=None,
        amplitude=1.0,
        angular_frequency=1.0,
        variant="no_carrier",
        eta=0.0,
        phase_plus=None,
        phase_minus=None,
        carrier_phase=None,
        period_count=200,
        steps_per_period=DEFAULT_STEPS_PER_PERIOD,
        sigma=0.0,
        seed=0,
        noise_mode="gaussian",
    ):
        self.params = params
        self.amplitude = amplitude
        self.angular_frequency = angular_frequency
        self.variant = variant
        self.eta = eta
        self.phase_plus = phase_plus
        self.phase_minus = phase_minus
        self.carrier_phase = carrier_phase
        self.period_count = period_count
        self.steps_per_period = steps_per_period
        self.sigma = sigma
        self.seed = seed
        self.noise_mode = noise_mode

    def resolve(self):
        """Build ``(params, incoming, pair, reference, carrier, duration, noise)`` from the settings."""
        p = self.params if self.params is not None else CntParams()
        incoming = WaveSpec(self.amplitude, self.angular_frequency)
        variant = Variant(self.variant)
        if variant is Variant.NO_CARRIER:
            choice = optimal_no_carrier(p, incoming, self.eta)
        else:
            choice = optimal_no_reference(p, incoming)
        pair = choice.phases
        if self.phase_plus is not None or self.phase_minus is not None:
            pair = PhasePair(
                pair.phase_plus if self.phase_plus is None else self.phase_plus,
                pair.phase_minus if self.phase_minus is None else self.phase_minus,
            )
        carrier = choice.carrier
        if self.carrier_phase is not None:
            carrier = CarrierSpec(carrier.kind, self.carrier_phase, carrier.base_frequency)
        T = symbol_duration(self.angular_frequency, self.period_count)
        noise = NoiseSpec(self.sigma, self.seed, self.noise_mode)
        return p, incoming, pair, choice.reference, carrier, T, noise

    def fit(self, X=None, y=None):
        """Calibrate the noiseless reference statistics; ``X`` and ``y`` are ignored."""
        p, incoming, pair, reference, carrier, T, noise = self.resolve()
        self.context_ = calibrate(p, incoming, pair, reference, carrier, T, self.steps_per_period)
        self.duration_ = T
        self.noise_ = noise
        self.carrier_ = carrier
        self.classes_ = np.array([int(Symbol.MINUS), int(Symbol.PLUS)])
        self.n_features_in_ = 1
        return self

    @property
    def separation_(self) -> float:
        """Constellation distance of the calibrated references."""
        check_is_fitted(self, "context_")
        return self.context_.separation

    @property
    def noise_std_(self) -> float:
        """Standard deviation of the integrated noise, ``sigma / sqrt(T_s)``."""
        check_is_fitted(self, "context_")
        return self.noise_.sigma / math.sqrt(self.duration_.duration)

    def transmit(self, symbols, start=0):
        """Noisy statistics for ``symbols`` (+1/-1); draw ``i`` uses noise index ``start + i``."""
        check_is_fitted(self, "context_")
        symbols = np.asarray(symbols).ravel()
        if not np.all(np.isin(symbols, self.classes_)):
            raise ValueError("symbols must be +1 or -1")
        d0 = np.where(symbols == int(Symbol.PLUS), self.context_.d_plus_ref, self.context_.d_minus_ref)
        n = noise_samples(self.noise_, self.carrier_, self.duration_, int(start), d0.size)
        return (d0 + n).reshape(-1, 1)

    def decision_function(self, X):
        """Positive values vote for PLUS."""
        check_is_fitted(self, "context_")
        X = check_array(X, ensure_2d=True)
        if X.shape[1] != 1:
            raise ValueError("expected a single column of demodulator statistics")
        orient = 1.0 if self.context_.d_plus_ref > self.context_.d_minus_ref else -1.0
        return orient * (X[:, 0] - self.context_.threshold)

    def predict(self, X):
        check_is_fitted(self, "context_")
        X = check_array(X, ensure_2d=True)
        if X.shape[1] != 1:
            raise ValueError("expected a single column of demodulator statistics")
        return detect_statistics(X[:, 0], self.context_)
