"""
Swap Protocol: Bell-state measurement on the leaked photons
Conditional two-qubit states after projecting the two outgoing fields onto a
Bell state, their concurrence in closed form, and the times at which the
Phi+ outcome leaves the qubits maximally entangled.

Conditional amplitudes on |ee>, |eg>, |ge>, |gg> with c_i = cos(theta_i/2),
d_i = sin(theta_i/2) e^{i phi_i}, after cancelling the common photon-overlap
factor (upper sign: Psi-/Phi+):

    Psi-/+ :  a = 0,            b = c1 c2 E,   c = -/+ c1 c2 E,  d = d1 c2 -/+ d2 c1
    Phi+/- :  a = c1 c2 E^2,    b = c1 E d2,   c = d1 c2 E,      d = d1 d2 +/- c1 c2 Gamma^2
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional

import numpy as np
from scipy.optimize import brentq

from .dynamics import SystemParams, amplitude_pair, gamma_amplitude, survival_amplitude
from .errors import InvalidParameterError, ZeroProbabilityOutcomeError
from .qubit_algebra import PureTwoQubitState, QubitInit, check_bloch_angles
from .utils import log

ZERO_PROBABILITY_TOL = 1e-14
SCAN_STEP = 1e-3
ROOT_XTOL = 1e-10
PEAK_TOL = 1e-9


@dataclass(frozen=True)
class PairInit:
    """Bloch angles of both qubits."""
    theta1: float
    phi1: float
    theta2: float
    phi2: float

    def __post_init__(self):
        check_bloch_angles(self.theta1, self.phi1)
        check_bloch_angles(self.theta2, self.phi2)

    @classmethod
    def identical(cls, theta: float, phi: float = 0.0) -> "PairInit":
        return cls(theta, phi, theta, phi)

    @property
    def first(self) -> QubitInit:
        return QubitInit(self.theta1, self.phi1)

    @property
    def second(self) -> QubitInit:
        return QubitInit(self.theta2, self.phi2)

    def swapped(self) -> "PairInit":
        return PairInit(self.theta2, self.phi2, self.theta1, self.phi1)


class BellChannel(Enum):
    PSI_MINUS = "psi-minus"
    PSI_PLUS = "psi-plus"
    PHI_PLUS = "phi-plus"
    PHI_MINUS = "phi-minus"

    @property
    def sign(self) -> int:
        return 1 if self in (BellChannel.PSI_PLUS, BellChannel.PHI_PLUS) else -1

    @property
    def is_psi(self) -> bool:
        return self in (BellChannel.PSI_MINUS, BellChannel.PSI_PLUS)

    @classmethod
    def parse(cls, name: str) -> "BellChannel":
        """Accepts 'psi-minus', 'PsiMinus', 'psi_minus', ... (case and separators ignored)."""
        key = name.strip().lower().replace("-", "").replace("_", "")
        for channel in cls:
            if channel.value.replace("-", "") == key:
                return channel
        raise InvalidParameterError(f"Unknown Bell channel: {name}")


# =========================
# Conditional states
# =========================

def bsm_amplitudes(
    channel: BellChannel,
    params: SystemParams,
    init: PairInit,
    t: float,
    overlap: complex = 1.0,
) -> np.ndarray:
    """
    Unnormalized conditional amplitudes on |ee>, |eg>, |ge>, |gg>.

    Args:
        channel: Bell outcome
        params: System parameters (shared by both cavities)
        init: Initial Bloch angles
        t: Scaled time
        overlap: Common photon-overlap factor multiplying every amplitude
    """
    pair = amplitude_pair(params, t)
    c1, c2 = init.first.excited, init.second.excited
    d1, d2 = init.first.ground, init.second.ground
    sign = channel.sign
    e = pair.survival

    if channel.is_psi:
        amplitudes = [0j, c1 * c2 * e, sign * c1 * c2 * e, d1 * c2 + sign * d2 * c1]
    else:
        amplitudes = [c1 * c2 * e * e, c1 * e * d2, d1 * c2 * e, d1 * d2 + sign * c1 * c2 * pair.gamma ** 2]
    return overlap * np.array(amplitudes, dtype=complex)


def post_bsm_state(
    channel: BellChannel,
    params: SystemParams,
    init: PairInit,
    t: float,
    overlap: complex = 1.0,
) -> PureTwoQubitState:
    """
    Normalized two-qubit state conditioned on the Bell outcome.

    The overlap factor drops out on normalization; passing it only changes
    the global phase.

    Raises:
        ZeroProbabilityOutcomeError: If the reduced amplitudes have squared norm < 1e-14
        InvalidParameterError: If overlap is zero or tau < 0
    """
    if overlap == 0:
        raise InvalidParameterError("Photon overlap factor must be nonzero")
    reduced = bsm_amplitudes(channel, params, init, t)
    weight = float(np.vdot(reduced, reduced).real)
    if weight < ZERO_PROBABILITY_TOL:
        raise ZeroProbabilityOutcomeError(
            f"{channel.value} outcome has zero probability at tau={t} for {init}"
        )
    vector = overlap * reduced
    return PureTwoQubitState.from_vector(vector / np.linalg.norm(vector))


# =========================
# Closed-form concurrence
# =========================

def psi_concurrence_terms(channel: BellChannel, survival, theta1, phi1, theta2, phi2):
    """
    (T1, T2) of the Psi outcomes, concurrence T1 / (T1 + T2); vectorized.

    T1 = 2 cos^2(theta1/2) cos^2(theta2/2) |E|^2
    T2 = sin^2((theta1 -/+ theta2)/2) +/- sin(theta1) sin(theta2) sin^2((phi1 - phi2)/2)
    """
    x1 = np.cos(theta1 / 2.0) ** 2
    x2 = np.cos(theta2 / 2.0) ** 2
    t1 = 2.0 * x1 * x2 * np.abs(survival) ** 2
    ridge = np.sin(theta1) * np.sin(theta2) * np.sin((phi1 - phi2) / 2.0) ** 2
    if channel is BellChannel.PSI_MINUS:
        t2 = np.sin((theta1 - theta2) / 2.0) ** 2 + ridge
    else:
        t2 = np.maximum(np.sin((theta1 + theta2) / 2.0) ** 2 - ridge, 0.0)
    return t1, t2


def phi_concurrence_terms(channel: BellChannel, survival, gamma, theta1, phi1, theta2, phi2):
    """
    (T, N) of the Phi outcomes, concurrence T / N; vectorized.

    T = 2 c1^2 c2^2 |E|^2 |Gamma|^2
    N = c1^2 c2^2 (|E|^4 + |Gamma|^4) + |E|^2 (1 - cos(theta1) cos(theta2)) / 2
        + s1^2 s2^2 +/- sin(theta1) sin(theta2) Re(e^{-i(phi1 + phi2)} Gamma^2) / 2
    """
    x1 = np.cos(theta1 / 2.0) ** 2
    x2 = np.cos(theta2 / 2.0) ** 2
    e2 = np.abs(survival) ** 2
    gm2 = np.abs(gamma) ** 2
    numerator = 2.0 * x1 * x2 * e2 * gm2
    cross = 0.5 * np.sin(theta1) * np.sin(theta2) * np.real(np.exp(-1j * (phi1 + phi2)) * gamma ** 2)
    norm = (
        x1 * x2 * (e2 * e2 + gm2 * gm2)
        + 0.5 * e2 * (1.0 - np.cos(theta1) * np.cos(theta2))
        + (1.0 - x1) * (1.0 - x2)
        + channel.sign * cross
    )
    return numerator, np.maximum(norm, 0.0)


def concurrence_integrand(channel: BellChannel, survival: complex, gamma: complex) -> Callable:
    """
    Closed-form concurrence as a vectorized function of (theta1, phi1, theta2, phi2).

    Zero-probability configurations (a measure-zero set) contribute 0.
    """
    def integrand(theta1, phi1, theta2, phi2):
        if channel.is_psi:
            t1, t2 = psi_concurrence_terms(channel, survival, theta1, phi1, theta2, phi2)
            numerator, denominator = t1, t1 + t2
        else:
            numerator, denominator = phi_concurrence_terms(channel, survival, gamma, theta1, phi1, theta2, phi2)
        numerator = np.asarray(numerator, dtype=float)
        denominator = np.asarray(denominator, dtype=float)
        ratio = np.divide(
            numerator,
            denominator,
            out=np.zeros(np.broadcast(numerator, denominator).shape),
            where=denominator > ZERO_PROBABILITY_TOL,
        )
        return np.clip(ratio, 0.0, 1.0)

    return integrand


def swapped_concurrence(channel: BellChannel, params: SystemParams, init: PairInit, t: float) -> float:
    """
    Concurrence of the conditional state for any Bell outcome.

    Raises:
        ZeroProbabilityOutcomeError: If the outcome has zero probability
    """
    pair = amplitude_pair(params, t)
    angles = (init.theta1, init.phi1, init.theta2, init.phi2)
    if channel.is_psi:
        t1, t2 = psi_concurrence_terms(channel, pair.survival, *angles)
        numerator, denominator = float(t1), float(t1 + t2)
    else:
        numerator, denominator = (float(v) for v in phi_concurrence_terms(channel, pair.survival, pair.gamma, *angles))

    if denominator < ZERO_PROBABILITY_TOL:
        raise ZeroProbabilityOutcomeError(
            f"{channel.value} outcome has zero probability at tau={t} for {init}"
        )
    return min(1.0, max(0.0, numerator / denominator))


def concurrence_psi_minus(params: SystemParams, init: PairInit, t: float) -> float:
    """Concurrence T1 / (T1 + T2) after a Psi- outcome."""
    return swapped_concurrence(BellChannel.PSI_MINUS, params, init, t)


def concurrence_phi_plus(params: SystemParams, init: PairInit, t: float) -> float:
    """Concurrence T / N after a Phi+ outcome."""
    return swapped_concurrence(BellChannel.PHI_PLUS, params, init, t)


# =========================
# Maximal entanglement
# =========================

def maximal_entanglement_times(
    params: SystemParams,
    tau_max: float,
    log_callback: Optional[Callable[[str], None]] = None,
) -> List[float]:
    """
    All roots of |E(tau)| - |Gamma(tau)| in (0, tau_max].

    For two initially excited qubits these are exactly the times at which a
    Phi+ outcome leaves them maximally entangled. Roots are bracketed by a
    sign scan with step 1e-3 and refined with Brent's method to 1e-10.
    Weak coupling typically yields no root (empty list).

    Args:
        params: System parameters
        tau_max: End of the search interval
        log_callback: Receives a warning line for any root whose concurrence
            falls short of 1 - 1e-9
    """
    if not math.isfinite(tau_max) or tau_max <= 0:
        raise InvalidParameterError(f"tau_max must be positive, got {tau_max}")

    count = int(math.floor(tau_max / SCAN_STEP))
    grid = SCAN_STEP * np.arange(1, count + 1)
    if grid.size == 0 or grid[-1] < tau_max:
        grid = np.append(grid, tau_max)

    def gap(tau: float) -> float:
        return abs(survival_amplitude(params, tau)) - abs(gamma_amplitude(params, tau))

    values = np.abs(survival_amplitude(params, grid)) - np.abs(gamma_amplitude(params, grid))

    roots: List[float] = []
    for k in range(grid.size):
        if values[k] == 0.0:
            roots.append(float(grid[k]))
            continue
        if k + 1 < grid.size and values[k] * values[k + 1] < 0.0:
            roots.append(float(brentq(gap, grid[k], grid[k + 1], xtol=ROOT_XTOL)))

    both_excited = PairInit.identical(0.0)
    for root in roots:
        value = concurrence_phi_plus(params, both_excited, root)
        if value < 1.0 - PEAK_TOL:
            log(f"WARNING: root tau={root:.10f} has concurrence {value:.12f} < 1 - {PEAK_TOL:g}", log_callback)
    return roots
