import math
from pathlib import Path
from typing import List, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, ValidationInfo, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .constants import DisplayMode, Integration
from .exceptions import ConfigError

ROOT_DIR = Path(__file__).resolve().parents[2]
DEFAULT_CONFIG_PATH = ROOT_DIR / "config.yaml"


def _check_unit(name: str, value: float) -> None:
    if name.endswith("_diopter") and not math.isfinite(value):
        raise ValueError(f"{name} is in diopters and must be finite, got {value}")
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value}")
    if name.endswith("_m") and value <= 0:
        raise ValueError(f"{name} is a length in meters and must be > 0, got {value}")
    if name.endswith("_hz") and value <= 0:
        raise ValueError(f"{name} is a rate in hertz and must be > 0, got {value}")
    if name.endswith("_s") and value < 0:
        raise ValueError(f"{name} is a time in seconds and must be >= 0, got {value}")


class UnitSection(BaseModel):
    """
    Config section whose numeric keys are checked by their unit suffix: _m and _hz must be > 0, _s >= 0,
    _diopter finite and signed (drift offsets go negative). Every numeric key must be finite.
    """
    model_config = ConfigDict(extra='forbid')

    @field_validator('*', mode='after')
    @classmethod
    def check_unit_suffix(cls, value, info: ValidationInfo):
        if isinstance(value, bool):
            return value
        if isinstance(value, (int, float)):
            _check_unit(info.field_name, float(value))
        elif isinstance(value, list):
            for item in value:
                if isinstance(item, (int, float)) and not isinstance(item, bool):
                    _check_unit(info.field_name, float(item))
        return value


class DisplaySettings(UnitSection):
    pixel_pitch_m: float = 13.6e-6
    display_distance_m: float = 0.07
    panel_width_px: int = Field(default=1024, ge=1)
    panel_height_px: int = Field(default=768, ge=1)
    panel_width_m: float = 0.0139
    lens_power_min_diopter: float = 8.3
    lens_power_max_diopter: float = 20.0
    bitplane_rate_hz: float = 20000.0
    bit_depth: int = Field(default=8, ge=1)
    memory_bitplanes: int = Field(default=43520, ge=0)

    @model_validator(mode='after')
    def check_power_range(self):
        if not self.lens_power_max_diopter > self.lens_power_min_diopter > 0:
            raise ValueError(
                f"lens_power_max_diopter ({self.lens_power_max_diopter}) must exceed "
                f"lens_power_min_diopter ({self.lens_power_min_diopter}) > 0")
        return self


class EyeSettings(UnitSection):
    pupil_diameter_m: float = 0.004
    retina_distance_m: float = 0.017
    focus_diopter: float = Field(default=0.0, ge=0.0)


class LayoutSettings(UnitSection):
    near_diopter: float = Field(default=4.0, ge=0.0)
    far_diopter: float = Field(default=0.0, ge=0.0)
    plane_count: int = Field(default=40, ge=1)

    @model_validator(mode='after')
    def check_order(self):
        if self.plane_count > 1 and not self.near_diopter > self.far_diopter:
            raise ValueError(f"near_diopter ({self.near_diopter}) must exceed far_diopter ({self.far_diopter})")
        return self


class PsdSettings(UnitSection):
    beam_offset_m: float = 0.02
    psd_distance_m: float = 0.08
    psd_length_m: float = 0.03
    psd_precision_m: float = 15.0e-6
    noise_enabled: bool = True


class PlantSettings(UnitSection):
    transport_delay_s: float = 0.003
    time_constant_s: float = 0.0015
    drift_offset_diopter: float = 0.0
    drift_amplitude_diopter: float = 0.0
    drift_period_s: float = 10.0
    integration: Integration = Integration.EXACT


class ControllerSettings(UnitSection):
    sample_rate_hz: float = 200000.0
    adc_bits: int = Field(default=12, ge=1, le=24)
    dac_bits: int = Field(default=12, ge=1, le=24)
    dac_step_levels: float = Field(default=0.427, gt=0.0)
    trigger_window_fraction: float = Field(default=0.4, gt=0.0, lt=0.5)
    tracking_latency_s: float = 20.0e-6
    display_mode: DisplayMode = DisplayMode.CONTINUE
    bitplanes_per_trigger: int = Field(default=8, ge=1)
    initial_dac_level: float = Field(default=0.0, ge=0.0)
    duration_s: float = Field(default=0.3, gt=0.0)


class RenderSettings(UnitSection):
    focus_sweep: str = "sweep:0:4:169"
    oversample: int = Field(default=1, ge=1)
    spot_px: int = Field(default=3, ge=1)
    psf_grid_rows: int = Field(default=8, ge=1)
    psf_grid_cols: int = Field(default=5, ge=1)
    cell_px: int = Field(default=96, ge=1)


class OptimizeSettings(UnitSection):
    focus_samples: int = Field(default=81, ge=1)
    iterations: int = Field(default=500, ge=0)
    power_iterations: int = Field(default=20, ge=1)
    max_backtracks: int = Field(default=40, ge=1)
    clamp_upper: bool = False


class OracleSettings(UnitSection):
    n_x: int = Field(default=2048, ge=2)
    n_u: int = Field(default=512, ge=2)
    pixel_extent: float = Field(default=64.0, gt=0.0)
    u_margin: float = Field(default=1.5, ge=1.0)
    pupils_m: List[float] = Field(default_factory=lambda: [0.002, 0.003, 0.004, 0.005, 0.006])
    mismatches_diopter: List[float] = Field(default_factory=lambda: [0.0, 0.05, 0.5, 1.0, 2.0])
    plane_depths_diopter: List[float] = Field(default_factory=lambda: [0.0, 1.0, 2.0, 3.0, 4.0])


class PlanSettings(UnitSection):
    target_cycles_per_degree: float = Field(default=30.0, gt=0.0)
    frame_rate_hz: float = 60.0
    psd_span_travel_m: float = 7.0e-3


class AnalyzeSettings(UnitSection):
    reliability_floor_px: float = Field(default=3.0, gt=0.0)
    mtf_pad: int = Field(default=4096, ge=8)


class Settings(BaseSettings):
    model_config = SettingsConfigDict(extra='forbid')

    seed: int = Field(default=0, ge=0)
    output_dir: str = "./out"
    log_level: str = "INFO"
    display: DisplaySettings = Field(default_factory=DisplaySettings)
    eye: EyeSettings = Field(default_factory=EyeSettings)
    layout: LayoutSettings = Field(default_factory=LayoutSettings)
    psd: PsdSettings = Field(default_factory=PsdSettings)
    plant: PlantSettings = Field(default_factory=PlantSettings)
    controller: ControllerSettings = Field(default_factory=ControllerSettings)
    render: RenderSettings = Field(default_factory=RenderSettings)
    optimize: OptimizeSettings = Field(default_factory=OptimizeSettings)
    oracle: OracleSettings = Field(default_factory=OracleSettings)
    plan: PlanSettings = Field(default_factory=PlanSettings)
    analyze: AnalyzeSettings = Field(default_factory=AnalyzeSettings)

    @classmethod
    def settings_customise_sources(cls, settings_cls, init_settings, env_settings, dotenv_settings,
                                   file_secret_settings):
        # yaml only, the environment is never consulted
        return (init_settings,)

    @model_validator(mode='after')
    def check_bitplane_split(self):
        if self.controller.bitplanes_per_trigger > self.display.bit_depth:
            raise ValueError(
                f"controller.bitplanes_per_trigger ({self.controller.bitplanes_per_trigger}) "
                f"must not exceed display.bit_depth ({self.display.bit_depth})")
        if self.display.bit_depth % self.controller.bitplanes_per_trigger != 0:
            raise ValueError(
                f"controller.bitplanes_per_trigger ({self.controller.bitplanes_per_trigger}) "
                f"must divide display.bit_depth ({self.display.bit_depth})")
        return self


def _error_key(error: dict) -> str:
    loc = [str(part) for part in error.get("loc", ())]
    if not loc:
        # model-level validators carry the key in their message
        return "<root>"
    return ".".join(loc)


def parse_settings(data: dict) -> Settings:
    """Validate a config mapping, raising ConfigError that names the first offending key."""
    try:
        return Settings(**data)
    except ValidationError as e:
        first = e.errors()[0]
        raise ConfigError(_error_key(first), first.get("msg", str(e))) from e
    except TypeError as e:
        raise ConfigError("<root>", str(e)) from e


def load_settings(yaml_path: Optional[Union[str, Path]] = None) -> Settings:
    path = Path(yaml_path) if yaml_path else DEFAULT_CONFIG_PATH
    try:
        with open(path, "r") as f:
            yaml_data = yaml.safe_load(f) or {}
    except FileNotFoundError:
        raise ConfigError(str(path), "config file not found")
    except yaml.YAMLError as e:
        raise ConfigError(str(path), f"invalid yaml: {e}")
    if not isinstance(yaml_data, dict):
        raise ConfigError(str(path), "top level of the config must be a mapping")
    return parse_settings(yaml_data)
