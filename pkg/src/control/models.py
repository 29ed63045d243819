from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.utils.constants import DisplayMode
from src.utils.settings import PsdSettings


class PsdGeometry(BaseModel):
    """
    Laser-deflection tracking geometry. The beam enters the tunable lens beam_offset_m off axis and lands
    on a position sensing detector of length psd_length_m placed psd_distance_m behind the lens.
    """
    model_config = ConfigDict(frozen=True)

    beam_offset_m: float = Field(gt=0.0)
    psd_distance_m: float = Field(gt=0.0)
    psd_length_m: float = Field(gt=0.0)
    psd_precision_m: float = Field(gt=0.0)

    @classmethod
    def from_settings(cls, s: PsdSettings) -> "PsdGeometry":
        return cls(**s.model_dump(exclude={"noise_enabled"}))

    def spot_offset(self, power_diopter: float) -> float:
        # h = a (d_p D_x - 1)
        return self.beam_offset_m * (self.psd_distance_m * power_diopter - 1.0)

    def ratio(self, power_diopter: float) -> float:
        return 2.0 * self.spot_offset(power_diopter) / self.psd_length_m

    def spot_travel(self, power_min_diopter: float, power_max_diopter: float) -> float:
        return self.beam_offset_m * self.psd_distance_m * abs(power_max_diopter - power_min_diopter)

    def covers(self, power_min_diopter: float, power_max_diopter: float) -> bool:
        """True when the spot stays on the detector over the whole lens power range."""
        half = self.psd_length_m / 2.0
        return (abs(self.spot_offset(power_min_diopter)) <= half
                and abs(self.spot_offset(power_max_diopter)) <= half)


class CalibrationResult(BaseModel):
    """Depth in diopters as an affine function of the PSD ratio: 1/v = alpha + beta * r."""
    model_config = ConfigDict(frozen=True)

    alpha_diopter: float
    beta_diopter_per_ratio: float

    @model_validator(mode='after')
    def check_beta(self):
        if not np.isfinite(self.beta_diopter_per_ratio) or self.beta_diopter_per_ratio == 0.0:
            raise ValueError(f"beta must be finite and nonzero, got {self.beta_diopter_per_ratio}")
        if not np.isfinite(self.alpha_diopter):
            raise ValueError(f"alpha must be finite, got {self.alpha_diopter}")
        return self

    def diopter_of(self, r):
        return self.alpha_diopter + self.beta_diopter_per_ratio * r

    def ratio_of(self, diopter):
        return (diopter - self.alpha_diopter) / self.beta_diopter_per_ratio


class ControllerConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    targets: Tuple[float, ...]
    trigger_window: float = Field(gt=0.0)
    dac_step: float = Field(gt=0.0)
    sample_rate_hz: float = Field(gt=0.0)
    adc_bits: int = Field(default=12, ge=1, le=24)
    dac_bits: int = Field(default=12, ge=1, le=24)
    plane_display_time_s: float = Field(gt=0.0)
    tracking_latency_s: float = Field(default=0.0, ge=0.0)
    display_mode: DisplayMode = DisplayMode.CONTINUE
    initial_dac_level: float = Field(default=0.0, ge=0.0)

    @model_validator(mode='after')
    def check_targets(self):
        targets = np.asarray(self.targets, dtype=np.float64)
        if targets.size < 2:
            raise ValueError("the controller needs at least two targets")
        steps = np.diff(targets)
        if not (np.all(steps > 0) or np.all(steps < 0)):
            raise ValueError(f"targets must be strictly monotone: {self.targets}")
        if not self.trigger_window < np.min(np.abs(steps)) / 2.0:
            raise ValueError(
                f"trigger window {self.trigger_window} must be below half the minimum target spacing "
                f"{np.min(np.abs(steps)) / 2.0}")
        if self.initial_dac_level > self.max_level:
            raise ValueError(f"initial_dac_level {self.initial_dac_level} exceeds the DAC range {self.max_level}")
        return self

    @property
    def plane_count(self) -> int:
        return len(self.targets)

    @property
    def max_level(self) -> int:
        return 2 ** self.dac_bits - 1

    @property
    def sample_period_s(self) -> float:
        return 1.0 / self.sample_rate_hz

    @property
    def display_samples(self) -> int:
        return max(1, int(round(self.plane_display_time_s * self.sample_rate_hz)))

    @property
    def latency_samples(self) -> int:
        return int(round(self.tracking_latency_s * self.sample_rate_hz))
