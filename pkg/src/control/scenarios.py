"""
Named simulation scenarios, applied as overrides on top of a loaded config.

prototype: the config defaults. 3 ms lens delay and 1.5 ms lag make the lens overshoot the first and
last planes, so only about two thirds of each period is spent between r_1 and r_n.

display_limited: an instantaneous lens swept fast enough that every plane waits only for the
projector; the DAC pauses while a plane is shown.
"""
from typing import Any, Dict

from src.utils.exceptions import UsageError
from src.utils.settings import Settings, parse_settings
from src.utils.util_func import deep_merge_dicts

SCENARIOS: Dict[str, Dict[str, Any]] = {
    "prototype": {},
    "display_limited": {
        "psd": {"noise_enabled": False},
        "plant": {"transport_delay_s": 0.0, "time_constant_s": 0.0,
                  "drift_offset_diopter": 0.0, "drift_amplitude_diopter": 0.0},
        "controller": {"sample_rate_hz": 2.0e6, "dac_step_levels": 25.0, "tracking_latency_s": 0.0,
                       "display_mode": "hold", "duration_s": 0.1},
    },
}


def scenario_settings(name: str, base: Settings) -> Settings:
    if name not in SCENARIOS:
        raise UsageError(f"unknown scenario '{name}', choose from {sorted(SCENARIOS)}")
    return parse_settings(deep_merge_dicts(base.model_dump(mode="json"), SCENARIOS[name]))
