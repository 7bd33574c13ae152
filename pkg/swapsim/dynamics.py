"""
Dynamics Core: single-cavity amplitudes
Closed-form survival amplitude, emitted-photon amplitude, Lorentzian bath and
long-time limits for one qubit in a leaky cavity.

All times are scaled (tau = kappa * t, kappa = 1). The lossless cavity uses
g = 1 as its time unit instead.
"""

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from .errors import DegenerateModeError, InvalidParameterError

TimeLike = Union[float, np.ndarray]

# |Omega| * tau below this switches cosh/sinh to their Taylor series
SERIES_THRESHOLD = 1e-6

# |Re(Omega * tau / 2)| above this evaluates through the decaying exponentials
_EXP_SWITCH = 300.0


# =========================
# Parameters
# =========================

@dataclass(frozen=True)
class SystemParams:
    """
    Physical parameters of one qubit-cavity unit.

    Attributes:
        g: Qubit-cavity coupling (units of kappa)
        kappa: Cavity decay rate, 0 only for the lossless cavity
        delta: Detuning omega_c - omega_qb (units of kappa)
        ideal_cavity: Lossless branch (kappa = 0, g is the time unit)
    """
    g: float
    kappa: float = 1.0
    delta: float = 0.0
    ideal_cavity: bool = False

    def __post_init__(self):
        if not math.isfinite(self.g) or self.g <= 0:
            raise InvalidParameterError(f"Coupling g must be positive, got {self.g}")
        if not math.isfinite(self.kappa) or self.kappa < 0:
            raise InvalidParameterError(f"Decay rate kappa must be >= 0, got {self.kappa}")
        if not math.isfinite(self.delta):
            raise InvalidParameterError(f"Detuning must be finite, got {self.delta}")
        if self.ideal_cavity and self.kappa != 0:
            raise InvalidParameterError("A lossless cavity requires kappa = 0")
        if self.kappa == 0 and not self.ideal_cavity:
            raise InvalidParameterError("kappa = 0 requires ideal_cavity=True (see SystemParams.ideal)")

    @classmethod
    def from_ratio(cls, r: float, delta: float = 0.0) -> "SystemParams":
        """Parameters in kappa = 1 units from R = g/kappa and delta/kappa."""
        return cls(g=float(r), kappa=1.0, delta=float(delta))

    @classmethod
    def ideal(cls, delta: float = 0.0) -> "SystemParams":
        """Lossless cavity in g = 1 units."""
        return cls(g=1.0, kappa=0.0, delta=float(delta), ideal_cavity=True)

    @property
    def ratio(self) -> float:
        """R = g/kappa (infinite for the lossless cavity)."""
        return self.g / self.kappa if self.kappa > 0 else math.inf

    @property
    def s(self) -> complex:
        """Complex memory rate kappa + i*delta."""
        return complex(self.kappa, self.delta)


@dataclass(frozen=True)
class RateConstants:
    omega_r: float
    omega: complex
    lambda_plus: complex
    lambda_minus: complex


@dataclass(frozen=True)
class AmplitudePair:
    """Survival amplitude and emitted-photon amplitude at one time."""
    survival: complex
    gamma: complex


class CouplingRegime(Enum):
    IDEAL = "ideal"
    STRONG = "strong"
    WEAK = "weak"


# =========================
# Rates
# =========================

def rate_constants(params: SystemParams) -> RateConstants:
    """
    Rabi frequency, complex rate Omega and the two exponents of the survival amplitude.

    Omega is the principal square root of kappa^2 - Omega_R^2 + 2i*delta*kappa
    (Re >= 0, and Im >= 0 on the imaginary axis).
    """
    omega_r = math.sqrt(params.delta ** 2 + 4.0 * params.g ** 2)
    # + 0.0 turns a signed zero into +0.0 so ties land on Im >= 0
    omega = cmath.sqrt(complex(params.kappa ** 2 - omega_r ** 2, 2.0 * params.delta * params.kappa + 0.0))
    s = params.s
    return RateConstants(
        omega_r=omega_r,
        omega=omega,
        lambda_plus=(-s + omega) / 2.0,
        lambda_minus=(-s - omega) / 2.0,
    )


def coupling_regime(params: SystemParams) -> CouplingRegime:
    """STRONG when 2g > kappa (oscillatory exchange at resonance), WEAK otherwise."""
    if params.ideal_cavity:
        return CouplingRegime.IDEAL
    if 2.0 * params.g > params.kappa:
        return CouplingRegime.STRONG
    return CouplingRegime.WEAK


# =========================
# Amplitudes
# =========================

def _checked_times(t: TimeLike, name: str = "t") -> np.ndarray:
    tau = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(tau)):
        raise InvalidParameterError(f"{name} must be finite")
    if np.any(tau < 0):
        raise InvalidParameterError(f"{name} must be >= 0, got min {tau.min()}")
    return tau


def _returned(values: np.ndarray, scalar: bool):
    if scalar:
        return complex(values)
    return values


def _damped_propagators(params: SystemParams, tau: np.ndarray):
    """
    e^{-s tau/2} cosh(Omega tau/2) and e^{-s tau/2} sinh(Omega tau/2)/Omega.

    Near |Omega| tau = 0 both use a 4-term Taylor series; for very large
    |Re(Omega tau)| they are assembled from the decaying exponentials.
    """
    rates = rate_constants(params)
    omega = rates.omega
    s = params.s
    z = omega * tau / 2.0
    z2 = z * z
    damp = np.exp(-s * tau / 2.0)

    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        if omega != 0:
            cosh_part = damp * np.cosh(z)
            sinh_part = damp * np.sinh(z) / omega
        else:
            cosh_part = np.zeros_like(z)
            sinh_part = np.zeros_like(z)

        far = np.abs(z.real) > _EXP_SWITCH
        if np.any(far):
            grow = np.exp(rates.lambda_plus * tau)
            shrink = np.exp(rates.lambda_minus * tau)
            cosh_part = np.where(far, 0.5 * (grow + shrink), cosh_part)
            sinh_part = np.where(far, 0.5 * (grow - shrink) / omega, sinh_part)

    small = np.abs(omega) * tau < SERIES_THRESHOLD
    if np.any(small):
        cosh_part = np.where(small, damp * (1.0 + z2 / 2.0 + z2 * z2 / 24.0), cosh_part)
        sinh_part = np.where(small, damp * (tau / 2.0) * (1.0 + z2 / 6.0 + z2 * z2 / 120.0), sinh_part)

    return cosh_part, sinh_part


def survival_amplitude(params: SystemParams, t: TimeLike):
    """
    Survival amplitude E(tau) = C(tau)/C(0) of the excited qubit.

    Accepts a scalar time (returns complex) or an array of times (returns a
    complex array of the same shape).

    Raises:
        InvalidParameterError: If any time is negative
    """
    scalar = np.ndim(t) == 0
    tau = _checked_times(t)

    if params.ideal_cavity and params.delta == 0:
        return _returned(np.cos(params.g * tau) + 0j, scalar)

    cosh_part, sinh_part = _damped_propagators(params, tau)
    return _returned(cosh_part + params.s * sinh_part, scalar)


def gamma_amplitude(params: SystemParams, t: TimeLike):
    """
    Emitted-photon amplitude Gamma(tau) for an incoming pulse matched to the cavity line.

    Raises:
        InvalidParameterError: If any time is negative
    """
    scalar = np.ndim(t) == 0
    tau = _checked_times(t)

    if params.ideal_cavity and params.delta == 0:
        return _returned(-1j * np.sin(params.g * tau), scalar)

    _, sinh_part = _damped_propagators(params, tau)
    return _returned(-2j * params.g * sinh_part, scalar)


def amplitude_pair(params: SystemParams, t: float) -> AmplitudePair:
    return AmplitudePair(
        survival=survival_amplitude(params, float(t)),
        gamma=gamma_amplitude(params, float(t)),
    )


def markovian_amplitude(params: SystemParams, t: TimeLike):
    """
    Bad-cavity limit exp(-g^2 tau / (kappa + i delta)) of the survival amplitude.

    Raises:
        InvalidParameterError: For the lossless cavity or negative times
    """
    if params.ideal_cavity:
        raise InvalidParameterError("The Markovian limit needs a lossy cavity")
    scalar = np.ndim(t) == 0
    tau = _checked_times(t)
    return _returned(np.exp(-params.g ** 2 * tau / params.s), scalar)


# =========================
# Bath
# =========================

def spectral_density(params: SystemParams, offset: TimeLike):
    """
    Lorentzian spectral density g^2 kappa / (pi (offset^2 + kappa^2)).

    Args:
        params: System parameters (lossy cavity only)
        offset: Frequency relative to the cavity frequency, scalar or array

    Raises:
        InvalidParameterError: For the lossless cavity, whose density is a point mass
    """
    if params.ideal_cavity:
        raise InvalidParameterError("Lossless cavity has a point-mass spectral density")
    w = np.asarray(offset, dtype=float)
    density = params.g ** 2 * params.kappa / (math.pi * (w * w + params.kappa ** 2))
    if np.ndim(offset) == 0:
        return float(density)
    return density


def correlation_kernel(params: SystemParams, s: TimeLike):
    """Memory kernel g^2 e^{-kappa s} e^{-i delta s} for s >= 0."""
    scalar = np.ndim(s) == 0
    lag = _checked_times(s, name="s")
    return _returned(params.g ** 2 * np.exp(-params.s * lag), scalar)


# =========================
# Long-time limit
# =========================

def stationary_concurrence_limit(params: SystemParams) -> float:
    """
    Long-time swapped concurrence for two excited qubits and the Phi+ outcome.

    Once the slower exponent dominates, |Gamma/E| tends to r = |2g/(Omega + s)|
    and the concurrence 2x/(1+x^2), x = r^2, tends to 2r^2/(1 + r^4).

    Raises:
        DegenerateModeError: If both exponents decay at the same rate
            (resonant strong coupling, lossless cavity); evaluate the
            concurrence at large tau directly instead.
    """
    rates = rate_constants(params)
    if params.ideal_cavity or rates.omega.real <= 1e-12 * max(1.0, abs(rates.omega)):
        raise DegenerateModeError(
            "Both modes decay at the same rate; no stationary limit. "
            "Evaluate concurrence_phi_plus at large tau instead."
        )
    r = abs(2.0 * params.g / (rates.omega + params.s))
    return 2.0 * r ** 2 / (1.0 + r ** 4)
