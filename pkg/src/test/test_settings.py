import types

import pytest

import src.utils
from main import build_parser, resolve_settings
from src.utils.constants import DisplayMode, Integration
from src.utils.exceptions import ConfigError
from src.utils.settings import ROOT_DIR, Settings, load_settings, parse_settings


def test_shipped_configs_load():
    s = load_settings()
    assert s.layout.plane_count == 40
    assert s.controller.display_mode is DisplayMode.CONTINUE
    assert s.plant.integration is Integration.EXACT

    example = load_settings(ROOT_DIR / "config.example.yaml")
    assert example.controller.display_mode is DisplayMode.HOLD


def test_defaults_match_shipped_config():
    assert load_settings().model_dump() == Settings().model_dump()


@pytest.mark.parametrize("data, key", [
    ({"display": {"pixel_pich_m": 1e-5}}, "display.pixel_pich_m"),
    ({"eye": {"pupil_diameter_m": -0.004}}, "eye.pupil_diameter_m"),
    ({"plant": {"time_constant_s": -1.0}}, "plant.time_constant_s"),
    ({"controller": {"sample_rate_hz": 0}}, "controller.sample_rate_hz"),
    ({"layout": {"near_diopter": 0.0, "far_diopter": 1.0}}, "layout"),
    ({"mystery": 1}, "mystery"),
])
def test_errors_name_the_key(data, key):
    with pytest.raises(ConfigError) as e:
        parse_settings(data)
    assert e.value.key == key
    assert key in str(e.value)


def test_bitplane_split_is_checked():
    with pytest.raises(ConfigError):
        parse_settings({"controller": {"bitplanes_per_trigger": 3}})


def test_bad_files(tmp_path):
    with pytest.raises(ConfigError):
        load_settings(tmp_path / "missing.yaml")
    (tmp_path / "list.yaml").write_text("- 1\n- 2\n")
    with pytest.raises(ConfigError):
        load_settings(tmp_path / "list.yaml")
    (tmp_path / "broken.yaml").write_text("display: [unclosed\n")
    with pytest.raises(ConfigError):
        load_settings(tmp_path / "broken.yaml")


@pytest.mark.parametrize("data, key", [
    ({"plant": {"drift_offset_diopter": float("nan")}}, "plant.drift_offset_diopter"),
    ({"display": {"lens_power_max_diopter": float("inf")}}, "display.lens_power_max_diopter"),
    ({"oracle": {"mismatches_diopter": [0.0, float("-inf")]}}, "oracle.mismatches_diopter"),
])
def test_diopter_keys_must_be_finite(data, key):
    with pytest.raises(ConfigError) as e:
        parse_settings(data)
    assert e.value.key == key
    assert "diopters" in e.value.message


def test_diopter_keys_may_be_negative():
    s = parse_settings({"plant": {"drift_offset_diopter": -0.2}})
    assert s.plant.drift_offset_diopter == -0.2


def test_config_is_read_per_run_not_at_import(tmp_path):
    assert isinstance(src.utils.settings, types.ModuleType)
    config = tmp_path / "run.yaml"
    config.write_text("seed: 5\nlayout:\n  plane_count: 12\n")
    s = resolve_settings(build_parser().parse_args(["--config", str(config), "plan"]))
    assert s.seed == 5
    assert s.layout.plane_count == 12
