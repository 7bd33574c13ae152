"""
Averaging: state-independent figures of merit
Haar-averaged linear entropy of one qubit and the entangling power of each
Bell outcome, averaged over all pure product initial states.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from .dynamics import SystemParams, amplitude_pair, survival_amplitude
from .errors import InvalidParameterError
from .oracles import haar_average_montecarlo, haar_average_quadrature
from .qubit_algebra import linear_entropy_closed_form
from .swap_protocol import BellChannel, concurrence_integrand
from .utils import DEFAULT_SEED


class AverageScheme(Enum):
    QUADRATURE = "quadrature"
    MONTECARLO = "montecarlo"

    @classmethod
    def parse(cls, name: str) -> "AverageScheme":
        key = name.strip().lower()
        aliases = {"q": cls.QUADRATURE, "quad": cls.QUADRATURE, "mc": cls.MONTECARLO}
        if key in aliases:
            return aliases[key]
        for scheme in cls:
            if scheme.value == key:
                return scheme
        raise InvalidParameterError(f"Unknown averaging scheme: {name}")


@dataclass(frozen=True)
class AverageSpec:
    """
    How to average over the product Bloch measure.

    Attributes:
        scheme: quadrature or montecarlo
        nodes: Gauss-Legendre points per x = cos^2(theta/2) variable
        angle_nodes: Trapezoid points per angle variable
        samples: Monte Carlo sample count
        seed: Monte Carlo seed
    """
    scheme: AverageScheme = AverageScheme.QUADRATURE
    nodes: int = 32
    angle_nodes: int = 64
    samples: int = 200_000
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.scheme is AverageScheme.QUADRATURE:
            if self.nodes < 8:
                raise InvalidParameterError(f"Quadrature needs nodes >= 8, got {self.nodes}")
            if self.angle_nodes < 4:
                raise InvalidParameterError(f"Quadrature needs angle_nodes >= 4, got {self.angle_nodes}")
        elif self.samples < 1000:
            raise InvalidParameterError(f"Monte Carlo needs samples >= 1000, got {self.samples}")


def _haar_average(integrand, spec: AverageSpec) -> Tuple[float, float]:
    if spec.scheme is AverageScheme.QUADRATURE:
        return haar_average_quadrature(integrand, spec.nodes, spec.angle_nodes), 0.0
    return haar_average_montecarlo(integrand, spec.samples, spec.seed)


def average_linear_entropy(params: SystemParams, t: float, spec: Optional[AverageSpec] = None) -> float:
    """
    Haar average of the single-qubit linear entropy at scaled time tau.

    Without a spec the closed form (2/3) eps (1 - eps), eps = |E|^2, is
    returned. With a spec the average is computed numerically from
    S = 2 cos^4(theta/2) eps (1 - eps).
    """
    eps = abs(survival_amplitude(params, t)) ** 2
    if spec is None:
        return 2.0 / 3.0 * eps * (1.0 - eps)

    def integrand(theta1, phi1, theta2, phi2):
        return linear_entropy_closed_form(eps, theta1)

    value, _ = _haar_average(integrand, spec)
    return value


def entangling_power_estimate(
    channel: BellChannel,
    params: SystemParams,
    t: float,
    spec: Optional[AverageSpec] = None,
) -> Tuple[float, float]:
    """
    Entangling power and its statistical error (0 for quadrature).

    Returns:
        (value clipped to [0, 1], standard error)
    """
    spec = spec or AverageSpec()
    pair = amplitude_pair(params, t)
    value, stderr = _haar_average(concurrence_integrand(channel, pair.survival, pair.gamma), spec)
    return min(1.0, max(0.0, value)), stderr


def entangling_power(
    channel: BellChannel,
    params: SystemParams,
    t: float,
    spec: Optional[AverageSpec] = None,
) -> float:
    """Haar average of the swapped concurrence over all pure product initial states."""
    value, _ = entangling_power_estimate(channel, params, t, spec)
    return value
