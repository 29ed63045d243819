from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.utils.settings import DisplaySettings, EyeSettings, LayoutSettings


class DisplayModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    pixel_pitch_m: float = Field(gt=0.0)
    display_distance_m: float = Field(gt=0.0)
    panel_width_px: int = Field(default=1024, ge=1)
    panel_height_px: int = Field(default=768, ge=1)
    panel_width_m: float = Field(default=0.0139, ge=0.0)
    lens_power_min_diopter: float = Field(default=8.3, gt=0.0)
    lens_power_max_diopter: float = 20.0
    bitplane_rate_hz: float = Field(default=20000.0, gt=0.0)
    bit_depth: int = Field(default=8, ge=1)

    @model_validator(mode='after')
    def check_power_range(self):
        if not self.lens_power_max_diopter > self.lens_power_min_diopter:
            raise ValueError("lens_power_max_diopter must exceed lens_power_min_diopter")
        return self

    @classmethod
    def from_settings(cls, s: DisplaySettings) -> "DisplayModel":
        return cls(**s.model_dump(exclude={"memory_bitplanes"}))

    @property
    def display_diopter(self) -> float:
        """1/d_o, the lens power that puts the focal plane at infinity."""
        return 1.0 / self.display_distance_m

    @property
    def bitplane_period_s(self) -> float:
        return 1.0 / self.bitplane_rate_hz

    @property
    def plane_display_time_s(self) -> float:
        return self.bit_depth / self.bitplane_rate_hz

    @property
    def pixel_angle_rad(self) -> float:
        return self.pixel_pitch_m / self.display_distance_m


class EyeModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    pupil_diameter_m: float = Field(gt=0.0)
    retina_distance_m: float = Field(default=0.017, gt=0.0)
    focus_diopter: float = Field(default=0.0, ge=0.0)

    @classmethod
    def from_settings(cls, s: EyeSettings) -> "EyeModel":
        return cls(**s.model_dump())

    def focused_at(self, focus_diopter: float) -> "EyeModel":
        return EyeModel(pupil_diameter_m=self.pupil_diameter_m,
                        retina_distance_m=self.retina_distance_m,
                        focus_diopter=focus_diopter)

    @property
    def eye_lens_power_diopter(self) -> float:
        # 1/f_e = 1/v + 1/d_e
        return self.focus_diopter + 1.0 / self.retina_distance_m


class PlaneLayout(BaseModel):
    """Focal-plane depths in diopters, nearest plane first."""
    model_config = ConfigDict(frozen=True)

    depths_diopter: Tuple[float, ...]

    @model_validator(mode='after')
    def check_depths(self):
        depths = self.depths_diopter
        if len(depths) < 1:
            raise ValueError("a layout needs at least one plane")
        if any((not np.isfinite(d)) or d < 0 for d in depths):
            raise ValueError(f"plane depths must be finite and >= 0 diopters: {depths}")
        if any(b >= a for a, b in zip(depths, depths[1:])):
            raise ValueError(f"plane depths must be strictly decreasing: {depths}")
        return self

    @classmethod
    def uniform(cls, near_diopter: float, far_diopter: float, count: int) -> "PlaneLayout":
        if count == 1:
            return cls(depths_diopter=(float(near_diopter),))
        return cls(depths_diopter=tuple(float(d) for d in np.linspace(near_diopter, far_diopter, count)))

    @classmethod
    def from_settings(cls, s: LayoutSettings) -> "PlaneLayout":
        return cls.uniform(s.near_diopter, s.far_diopter, s.plane_count)

    @property
    def count(self) -> int:
        return len(self.depths_diopter)

    @property
    def near_diopter(self) -> float:
        return self.depths_diopter[0]

    @property
    def far_diopter(self) -> float:
        return self.depths_diopter[-1]

    @property
    def range_diopter(self) -> float:
        return self.near_diopter - self.far_diopter

    def as_array(self) -> np.ndarray:
        return np.asarray(self.depths_diopter, dtype=np.float64)

    def subset(self, indices) -> "PlaneLayout":
        """Layout made of the given zero-based plane indices, e.g. a sparse display emulated on a dense one."""
        return PlaneLayout(depths_diopter=tuple(self.depths_diopter[i] for i in sorted(indices)))
