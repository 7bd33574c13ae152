"""
Sweep configuration and figure recipes.

A SweepConfig names one quantity, the physical parameters (one or more
detunings), the initial states and the tau grid. fig_recipe returns the
configuration behind each standard figure panel.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from .averaging import AverageSpec
from .dynamics import SystemParams
from .errors import ConfigError, InvalidParameterError
from .swap_protocol import BellChannel, PairInit


class Quantity(Enum):
    AMPLITUDE = "amplitude"
    GAMMA = "gamma"
    ENTROPY = "entropy"
    ENTROPY_AVG = "entropy-avg"
    CONCURRENCE = "concurrence"
    EPOWER = "epower"
    PEAK_TIMES = "peak-times"


BOTH_EXCITED = PairInit.identical(0.0)
BOTH_EQUATORIAL = PairInit.identical(math.pi / 2.0, 0.0)

# coarse enough for every entangling-power panel to finish within seconds
FIGURE_AVERAGE = AverageSpec(nodes=12, angle_nodes=24)


@dataclass(frozen=True)
class SweepConfig:
    """
    One parameter sweep.

    Attributes:
        quantity: What to evaluate on the tau grid
        channel: Bell outcome (concurrence, epower)
        r: Coupling ratio R = g/kappa (ignored for the lossless cavity)
        deltas: Detunings delta/kappa, one output variant each
        ideal: Lossless cavity in g = 1 units
        inits: Initial Bloch angles, one output variant each
        tau_max: End of the tau grid (search bound for peak-times)
        tau_step: Grid spacing
        average: Averaging spec (epower; entropy-avg uses the closed form when None)
        out: Output CSV path, stdout when None
        label: Recipe id, informational
    """
    quantity: Quantity
    channel: Optional[BellChannel] = None
    r: float = 10.0
    deltas: Tuple[float, ...] = (0.0,)
    ideal: bool = False
    inits: Tuple[PairInit, ...] = (BOTH_EXCITED,)
    tau_max: float = 1.0
    tau_step: float = 0.01
    average: Optional[AverageSpec] = None
    out: Optional[str] = None
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if not (self.tau_step > 0) or not math.isfinite(self.tau_step):
            raise ConfigError(f"tau-step must be positive, got {self.tau_step}")
        if not math.isfinite(self.tau_max) or self.tau_max < self.tau_step:
            raise ConfigError(f"tau-max ({self.tau_max}) must be >= tau-step ({self.tau_step})")
        if not self.deltas:
            raise ConfigError("At least one detuning is required")
        if not self.inits:
            raise ConfigError("At least one initial state is required")
        if self.quantity in (Quantity.CONCURRENCE, Quantity.EPOWER) and self.channel is None:
            raise ConfigError(f"{self.quantity.value} requires --channel")
        if self.quantity is Quantity.PEAK_TIMES and len(self.deltas) != 1:
            raise ConfigError("peak-times takes exactly one detuning")
        for delta in self.deltas:
            try:
                self.params_for(delta)
            except InvalidParameterError as e:
                raise ConfigError(str(e)) from e

    def params_for(self, delta: float) -> SystemParams:
        if self.ideal:
            return SystemParams.ideal(delta)
        return SystemParams.from_ratio(self.r, delta)

    def tau_grid(self) -> np.ndarray:
        count = int(math.floor(self.tau_max / self.tau_step + 1e-9))
        return self.tau_step * np.arange(count + 1)


_STRONG = dict(r=10.0, deltas=(0.0, 15.0), tau_max=3.0)
_WEAK = dict(r=0.1, deltas=(0.0, 1.5), tau_max=100.0)
_PEAK_INITS = (BOTH_EXCITED, BOTH_EQUATORIAL)

FIGURE_RECIPES = {
    "2a": dict(quantity=Quantity.ENTROPY_AVG, tau_step=0.01, **_STRONG),
    "2b": dict(quantity=Quantity.ENTROPY_AVG, tau_step=0.5, **_WEAK),
    "3a": dict(quantity=Quantity.EPOWER, channel=BellChannel.PSI_MINUS, tau_step=0.02, average=FIGURE_AVERAGE, **_STRONG),
    "3b": dict(quantity=Quantity.EPOWER, channel=BellChannel.PSI_MINUS, tau_step=1.0, average=FIGURE_AVERAGE, **_WEAK),
    "4a": dict(quantity=Quantity.CONCURRENCE, channel=BellChannel.PHI_PLUS, r=10.0, deltas=(0.0,),
               inits=_PEAK_INITS, tau_max=3.0, tau_step=0.001),
    "4b": dict(quantity=Quantity.CONCURRENCE, channel=BellChannel.PHI_PLUS, r=10.0, deltas=(15.0,),
               inits=_PEAK_INITS, tau_max=15.0, tau_step=0.005),
    "5": dict(quantity=Quantity.CONCURRENCE, channel=BellChannel.PHI_PLUS, r=0.1, deltas=(0.0,),
              inits=_PEAK_INITS, tau_max=100.0, tau_step=0.1),
    "6a": dict(quantity=Quantity.EPOWER, channel=BellChannel.PHI_PLUS, tau_step=0.02, average=FIGURE_AVERAGE, **_STRONG),
    "6b": dict(quantity=Quantity.EPOWER, channel=BellChannel.PHI_PLUS, tau_step=1.0, average=FIGURE_AVERAGE, **_WEAK),
}


def fig_recipe(fig_id: str) -> SweepConfig:
    """
    Sweep configuration reproducing one figure panel.

    Raises:
        ConfigError: Unknown figure id
    """
    key = str(fig_id).strip().lower()
    if key not in FIGURE_RECIPES:
        known = ", ".join(FIGURE_RECIPES)
        raise ConfigError(f"Unknown figure id: {fig_id} (known: {known})")
    return SweepConfig(label=key, **FIGURE_RECIPES[key])
