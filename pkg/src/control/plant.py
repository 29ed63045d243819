import logging
import math
from collections import deque
from typing import Optional

from src.utils.constants import Integration
from src.utils.exceptions import UsageError
from src.utils.settings import PlantSettings
from .converters import DacConverter

logger = logging.getLogger(__name__)


class LensPlant:
    """
    Focus-tunable lens driven by a DAC: transport delay, then a first-order lag, then a slow additive
    drift, then saturation to the lens power range.
    """

    def __init__(
            self,
            dac: DacConverter,
            dt_s: float,
            transport_delay_s: float = 0.0,
            time_constant_s: float = 0.0,
            drift_offset_diopter: float = 0.0,
            drift_amplitude_diopter: float = 0.0,
            drift_period_s: float = 10.0,
            integration: Integration = Integration.EXACT,
            initial_level: float = 0.0,
    ):
        """
        LensPlant
        :param dac: drive map from DAC level to commanded diopters
        :param dt_s: sample period
        :param transport_delay_s: pure delay, rounded to whole samples
        :param time_constant_s: first-order lag; 0 passes the delayed command through
        :param drift_offset_diopter:
        :param drift_amplitude_diopter: amplitude of the sinusoidal drift term
        :param drift_period_s:
        :param integration: exact discretization of the lag or forward Euler
        :param initial_level: DAC level the lens has settled at before the run
        """
        if dt_s <= 0:
            raise UsageError(f"sample period must be > 0, got {dt_s}")
        if integration is Integration.EULER and time_constant_s > 0 and dt_s / time_constant_s > 1.0:
            raise UsageError(f"forward Euler needs dt <= tau, got dt={dt_s} s, tau={time_constant_s} s")
        self.dac = dac
        self.dt_s = dt_s
        self.time_constant_s = time_constant_s
        self.drift_offset_diopter = drift_offset_diopter
        self.drift_amplitude_diopter = drift_amplitude_diopter
        self.drift_period_s = drift_period_s
        self.integration = integration
        self.delay_samples = int(round(transport_delay_s / dt_s))

        initial = dac.to_power(initial_level)
        self._delay_line = deque([initial] * self.delay_samples)
        self._lag = initial
        self.t_s = 0.0
        self.saturated = False
        self.power = self._saturate(initial + self.drift(0.0))

    @classmethod
    def from_settings(cls, s: PlantSettings, dac: DacConverter, dt_s: float,
                      initial_level: float = 0.0) -> "LensPlant":
        return cls(dac=dac, dt_s=dt_s, transport_delay_s=s.transport_delay_s, time_constant_s=s.time_constant_s,
                   drift_offset_diopter=s.drift_offset_diopter, drift_amplitude_diopter=s.drift_amplitude_diopter,
                   drift_period_s=s.drift_period_s, integration=s.integration, initial_level=initial_level)

    @property
    def power_min_diopter(self) -> float:
        return self.dac.power_min_diopter

    @property
    def power_max_diopter(self) -> float:
        return self.dac.power_max_diopter

    def drift(self, t_s: float) -> float:
        if self.drift_amplitude_diopter == 0.0:
            return self.drift_offset_diopter
        return self.drift_offset_diopter + self.drift_amplitude_diopter * math.sin(
            2.0 * math.pi * t_s / self.drift_period_s)

    def _saturate(self, power: float) -> float:
        lo, hi = self.power_min_diopter, self.power_max_diopter
        self.saturated = power < lo or power > hi
        return min(max(power, lo), hi)

    def _lag_gain(self) -> float:
        if self.time_constant_s == 0.0:
            return 1.0
        if self.integration is Integration.EULER:
            return self.dt_s / self.time_constant_s
        return 1.0 - math.exp(-self.dt_s / self.time_constant_s)

    def step(self, dac_level: float, dt_s: Optional[float] = None) -> float:
        """
        Advance one sample with the DAC at dac_level and return the new lens power.
        The power seen by a reader is the one set by the previous call.
        """
        if dt_s is not None and not math.isclose(dt_s, self.dt_s, rel_tol=1e-9):
            raise UsageError(f"plant was built for dt={self.dt_s} s, stepped with dt={dt_s} s")
        command = self.dac.to_power(dac_level)
        if self.delay_samples:
            self._delay_line.append(command)
            command = self._delay_line.popleft()
        self._lag += self._lag_gain() * (command - self._lag)
        self.t_s += self.dt_s
        self.power = self._saturate(self._lag + self.drift(self.t_s))
        if self.saturated:
            logger.debug("lens saturated at t=%.6f s", self.t_s)
        return self.power
