import math

import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError

from src.control import (PsdGeometry, ControllerConfig, AdcQuantizer, DacConverter, LensPlant, psd_read,
                         geometry_calibration, distinguishable_configs, calibrate, plane_targets, run_controller,
                         trace_metrics, TrackingSimulator, scenario_settings)
from src.metrics import linear_fit
from src.optics import PlaneLayout
from src.utils.constants import DisplayMode, Integration, TRACE_COLUMNS
from src.utils.exceptions import (PsdRangeError, DegenerateCalibrationError, EmptyTraceError, UsageError)
from src.utils.settings import Settings

geom = PsdGeometry(beam_offset_m=0.02, psd_distance_m=0.08, psd_length_m=0.03, psd_precision_m=15e-6)
dac = DacConverter(bits=12, power_min_diopter=8.3, power_max_diopter=20.0)
calib = geometry_calibration(geom, 0.07)
quantum_diopter = abs(calib.beta_diopter_per_ratio) * AdcQuantizer(12).quantum


def test_psd_read_examples():
    assert psd_read(12.5, geom).r == pytest.approx(0.0, abs=1e-15)

    exact = PsdGeometry(beam_offset_m=0.25, psd_distance_m=0.5, psd_length_m=1.0, psd_precision_m=0.01)
    edge = psd_read(6.0, exact)
    assert edge.h_m == 0.5
    assert edge.r == 1.0
    assert edge.i1 == 0.0 and edge.i2 == 1.0

    with pytest.raises(PsdRangeError):
        psd_read(30.0, geom)


def test_psd_ratio_is_affine_in_lens_power():
    powers = np.linspace(8.3, 20.0, 20)
    ratios = [psd_read(p, geom).r for p in powers]
    fit = linear_fit(ratios, powers)
    assert np.max(np.abs(fit.residuals)) <= 1e-12
    assert fit.slope == pytest.approx(0.03 / (2 * 0.02 * 0.08))
    assert fit.intercept == pytest.approx(1 / 0.08)


def test_psd_noise():
    clean = psd_read(11.0, geom)
    a, b = psd_read(11.0, geom, noise_seed=3), psd_read(11.0, geom, noise_seed=3)
    assert a == b
    assert abs(a.h_m - clean.h_m) <= 15e-6 / 2
    assert a.i1 + a.i2 == pytest.approx(1.0)


def test_geometry_calibration_matches_depth():
    assert calib.alpha_diopter == pytest.approx(1 / 0.07 - 1 / 0.08)
    assert calib.beta_diopter_per_ratio == pytest.approx(-9.375)
    for power in (10.2857, 12.0, 14.2857):
        assert calib.diopter_of(geom.ratio(power)) == pytest.approx(1 / 0.07 - power, abs=1e-12)


def test_distinguishable_configs():
    assert distinguishable_configs(geom, 7e-3) == 466
    assert distinguishable_configs(geom, 15e-6) == 1
    coarse = geom.model_copy(update={"psd_precision_m": 30e-6})
    assert distinguishable_configs(coarse, 7e-3) == 466 // 2
    with pytest.raises(PsdRangeError):
        distinguishable_configs(geom, 0.05)


def test_calibrate():
    result = calibrate(-0.5, 4.0, 0.5, 0.0)
    assert result.alpha_diopter == 2.0
    assert result.beta_diopter_per_ratio == -4.0
    assert result.diopter_of(-0.5) == 4.0
    assert result.diopter_of(0.5) == 0.0
    with pytest.raises(DegenerateCalibrationError):
        calibrate(0.1, 4.0, 0.1, 0.0)


def test_plane_targets():
    result = calibrate(-0.5, 4.0, 0.5, 0.0)
    assert plane_targets(result, 4.0, 0.0, 5) == pytest.approx([-0.5, -0.25, 0.0, 0.25, 0.5])
    assert plane_targets(result, 4.0, 0.0, 2) == pytest.approx([-0.5, 0.5])

    dense = calib.diopter_of(np.asarray(plane_targets(calib, 4.0, 0.0, 40)))
    assert np.diff(dense) == pytest.approx(np.full(39, -4.0 / 39))
    with pytest.raises(UsageError):
        plane_targets(result, 4.0, 0.0, 1)


def test_converters():
    adc = AdcQuantizer(12)
    assert adc.quantum == 2 / 4096
    assert adc.code(0.0) == 0
    assert adc.code(1.0) == 2047
    assert adc.code(-1.0) == -2048
    for r in np.linspace(-0.99, 0.99, 17):
        assert abs(adc.ratio(adc.code(r)) - r) <= adc.quantum / 2

    assert dac.to_power(0) == 8.3
    assert dac.to_power(4095) == pytest.approx(20.0)
    assert dac.level_for_power(dac.to_power(1234)) == pytest.approx(1234)


def test_identity_plant():
    plant = LensPlant(dac, dt_s=5e-6)
    assert plant.power == 8.3
    plant.step(1000)
    assert plant.power == dac.to_power(1000)


def test_plant_step_response():
    tau = 1.5e-3
    plant = LensPlant(dac, dt_s=5e-6, time_constant_s=tau)
    samples = 0
    while (plant.power - 8.3) / (20.0 - 8.3) < 0.95:
        plant.step(4095)
        samples += 1
    assert samples * 5e-6 == pytest.approx(3 * tau, abs=1e-4)


def test_plant_transport_delay_shifts_triangle():
    dt = 5e-6
    plant = LensPlant(dac, dt_s=dt, transport_delay_s=0.003)
    k = np.arange(14000)
    levels = np.rint(4000 * np.abs((k / 10000.0) % 1.0 * 2 - 1))
    commanded = np.array([dac.to_power(v) for v in levels])
    output = np.array([plant.step(v) for v in levels])

    seg = commanded[2000:12000] - commanded[2000:12000].mean()
    scores = [np.dot(seg, output[2000 + lag:12000 + lag] - output[2000 + lag:12000 + lag].mean())
              for lag in range(0, 2000)]
    assert int(np.argmax(scores)) * dt == pytest.approx(0.003)


def test_plant_drift_and_saturation():
    up = LensPlant(dac, dt_s=5e-6, drift_offset_diopter=0.2)
    assert up.power == pytest.approx(8.5)
    assert not up.saturated
    down = LensPlant(dac, dt_s=5e-6, drift_offset_diopter=-0.2)
    assert down.power == 8.3
    assert down.saturated

    wobble = LensPlant(dac, dt_s=5e-6, drift_amplitude_diopter=0.2, drift_period_s=1.0, initial_level=2000)
    assert wobble.drift(0.25) == pytest.approx(0.2)


def test_plant_rejects_bad_steps():
    with pytest.raises(UsageError):
        LensPlant(dac, dt_s=5e-3, time_constant_s=1.5e-3, integration=Integration.EULER)
    plant = LensPlant(dac, dt_s=5e-6)
    with pytest.raises(UsageError):
        plant.step(10, dt_s=1e-5)


def test_controller_config_validation():
    base = dict(dac_step=1.0, sample_rate_hz=2e5, plane_display_time_s=4e-4)
    with pytest.raises(ValidationError):
        ControllerConfig(targets=(0.0, 0.2, 0.1), trigger_window=0.01, **base)
    with pytest.raises(ValidationError):
        ControllerConfig(targets=(0.0, 0.1, 0.2), trigger_window=0.06, **base)
    cfg = ControllerConfig(targets=(0.0, 0.1, 0.2), trigger_window=0.04, **base)
    assert cfg.display_samples == 80
    assert cfg.max_level == 4095


def ideal_run(n, dac_step=0.5, window=None, latency_s=0.0, duration_s=0.12):
    layout = PlaneLayout.uniform(4.0, 0.0, n)
    targets = plane_targets(calib, 4.0, 0.0, n)
    cfg = ControllerConfig(targets=tuple(targets),
                           trigger_window=window if window is not None else 0.4 * abs(targets[1] - targets[0]),
                           dac_step=dac_step, sample_rate_hz=2e5, plane_display_time_s=4e-4,
                           tracking_latency_s=latency_s, display_mode=DisplayMode.HOLD)
    trace = run_controller(LensPlant(dac, dt_s=cfg.sample_period_s), geom, cfg, duration_s, noise_enabled=False)
    return trace, layout


def test_ideal_plant_plane_order():
    trace, layout = ideal_run(4)
    metrics = trace_metrics(trace, calib, layout)
    assert len(metrics.sweeps) >= 2
    assert all(sweep == [1, 2, 3, 4, 4, 3, 2, 1] for sweep in metrics.sweeps)
    assert metrics.missed_planes == []

    t = trace["t_s"].to_numpy()
    assert np.all(np.diff(t) > 0)
    assert np.diff(t) == pytest.approx(np.full(len(t) - 1, 5e-6))
    assert list(trace.columns[:len(TRACE_COLUMNS)]) == TRACE_COLUMNS


def test_ideal_plant_error_is_one_adc_quantum():
    trace, layout = ideal_run(4, window=0.5 * AdcQuantizer(12).quantum)
    metrics = trace_metrics(trace, calib, layout)
    assert not np.any(np.isnan(metrics.per_plane_depth_error_diopter))
    assert metrics.worst_depth_error_diopter <= quantum_diopter


def test_tracking_latency_adds_about_a_hundredth_diopter():
    plain, layout = ideal_run(40, dac_step=0.427, duration_s=0.16)
    delayed, _ = ideal_run(40, dac_step=0.427, latency_s=20e-6, duration_s=0.16)
    a = trace_metrics(plain, calib, layout).per_plane_depth_error_diopter
    b = trace_metrics(delayed, calib, layout).per_plane_depth_error_diopter
    assert np.max(np.abs(b - a)) <= 0.012


def test_rail_reverses_sweep_and_records_missed_planes(caplog):
    cfg = ControllerConfig(targets=(0.85, 0.9), trigger_window=0.01, dac_step=25.0, sample_rate_hz=2e5,
                           plane_display_time_s=4e-4)
    with caplog.at_level("WARNING"):
        trace = run_controller(LensPlant(dac, dt_s=cfg.sample_period_s), geom, cfg, 0.01, noise_enabled=False)
    assert "DAC rail" in caplog.text
    assert trace["event"].str.contains(r"missed\(1\)").any()
    assert trace["dac_level"].max() == 4095
    assert trace["dac_level"].min() == 0
    assert (trace["plane_index"] == 0).all()


def test_trace_metrics_errors():
    layout = PlaneLayout.uniform(4.0, 0.0, 4)
    with pytest.raises(EmptyTraceError):
        trace_metrics(pd.DataFrame(), calib, layout)
    short, _ = ideal_run(4, duration_s=0.005)
    with pytest.raises(EmptyTraceError):
        trace_metrics(short, calib, layout)


def test_controller_is_deterministic():
    s = Settings()
    first = TrackingSimulator.from_settings(s, duration_s=0.02, seed=7).run()
    second = TrackingSimulator.from_settings(s, duration_s=0.02, seed=7).run()
    pd.testing.assert_frame_equal(first, second)
    other = TrackingSimulator.from_settings(s, duration_s=0.02, seed=8).run()
    assert not np.array_equal(first["r"].to_numpy(), other["r"].to_numpy())


def test_display_limited_throughput(tmp_path):
    s = scenario_settings("display_limited", Settings())
    simulator = TrackingSimulator.from_settings(s, duration_s=0.12)
    metrics = simulator.analyze(show=False)
    assert metrics.planes_per_second == pytest.approx(2500, rel=0.01)
    assert metrics.planes_per_second <= 2500
    assert metrics.missed_planes == []
    assert all(sweep == list(range(1, 41)) + list(range(40, 0, -1)) for sweep in metrics.sweeps)

    path = simulator.save_trace(tmp_path / "trace.csv")
    assert path.read_text().splitlines()[0] == ",".join(TRACE_COLUMNS)
    assert simulator.plot(tmp_path / "trace.png").exists()


@pytest.mark.slow
def test_prototype_throughput():
    simulator = TrackingSimulator.from_settings(scenario_settings("prototype", Settings()), duration_s=0.3)
    metrics = simulator.analyze(show=False)
    assert metrics.planes_per_second == pytest.approx(1600, rel=0.03)
    assert metrics.frames_per_second == pytest.approx(40, abs=1)
    assert metrics.missed_planes == []
    assert len(metrics.sweeps) >= 3
    assert all(sweep == list(range(1, 41)) + list(range(40, 0, -1)) for sweep in metrics.sweeps)
    assert simulator.summary()["saturated_samples"] == 0


@pytest.mark.slow
def test_drift_barely_moves_depth_error():
    def errors(offset):
        data = Settings().model_dump(mode="json")
        data["psd"]["noise_enabled"] = False
        data["plant"]["drift_offset_diopter"] = offset
        simulator = TrackingSimulator.from_settings(Settings(**data), duration_s=0.3)
        return simulator.analyze(show=False).per_plane_depth_error_diopter

    reference = errors(0.0)
    for offset in (0.2, -0.2):
        assert np.max(np.abs(errors(offset) - reference)) < quantum_diopter


def test_unknown_scenario():
    with pytest.raises(UsageError):
        scenario_settings("warp", Settings())
    assert math.isclose(scenario_settings("display_limited", Settings()).controller.sample_rate_hz, 2e6)
