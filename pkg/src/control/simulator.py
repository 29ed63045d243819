import logging
from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from src.optics import DisplayModel, PlaneLayout, lens_power_for_depth, plane_budget
from src.utils.constants import DisplayMode, TRACE_COLUMNS
from src.utils.exceptions import PsdRangeError
from src.utils.settings import ControllerSettings, PlantSettings, Settings
from src.utils.util_func import format_report_row, print_report, write_csv
from .calibration import calibrate, plane_targets
from .controller import run_controller
from .converters import AdcQuantizer, DacConverter
from .models import CalibrationResult, ControllerConfig, PsdGeometry
from .plant import LensPlant
from .psd import psd_read
from .trace_metrics import TraceMetrics, trace_metrics

logger = logging.getLogger(__name__)


class TrackingSimulator:
    def __init__(
            self,
            display: DisplayModel,
            layout: PlaneLayout,
            geometry: PsdGeometry,
            plant: PlantSettings,
            controller: ControllerSettings,
            noise_enabled: bool = True,
            seed: int = 0,
            duration_s: Optional[float] = None,
    ):
        """
        TrackingSimulator
        :param display: panel, lens power range and bitplane rate
        :param layout: focal planes to place, nearest first
        :param geometry: laser and PSD placement
        :param plant: lens dynamics
        :param controller: converter resolution, sweep speed and trigger settings
        :param noise_enabled: PSD position noise
        :param seed:
        :param duration_s: overrides controller.duration_s
        """
        self.display = display
        self.layout = layout
        self.geometry = geometry
        self.plant_settings = plant
        self.controller_settings = controller
        self.noise_enabled = noise_enabled
        self.seed = seed
        self.duration_s = duration_s if duration_s is not None else controller.duration_s
        self.dac = DacConverter(bits=controller.dac_bits, power_min_diopter=display.lens_power_min_diopter,
                                power_max_diopter=display.lens_power_max_diopter)
        if not geometry.covers(self.dac.power_min_diopter, self.dac.power_max_diopter):
            raise PsdRangeError("the PSD spot leaves the detector within the lens power range")

        self.calibration: Optional[CalibrationResult] = None
        self.config: Optional[ControllerConfig] = None
        self.trace: Optional[pd.DataFrame] = None
        self.metrics: Optional[TraceMetrics] = None

    @classmethod
    def from_settings(cls, s: Settings, duration_s: Optional[float] = None,
                      seed: Optional[int] = None) -> "TrackingSimulator":
        return cls(display=DisplayModel.from_settings(s.display), layout=PlaneLayout.from_settings(s.layout),
                   geometry=PsdGeometry.from_settings(s.psd), plant=s.plant, controller=s.controller,
                   noise_enabled=s.psd.noise_enabled, seed=s.seed if seed is None else seed,
                   duration_s=duration_s)

    def calibrate(self) -> CalibrationResult:
        """Two noiseless readings with the lens set for the nearest and the farthest plane."""
        near, far = self.layout.near_diopter, self.layout.far_diopter
        r_near = psd_read(lens_power_for_depth(self.display, near), self.geometry).r
        r_far = psd_read(lens_power_for_depth(self.display, far), self.geometry).r
        self.calibration = calibrate(r_near, near, r_far, far)
        return self.calibration

    def build_config(self) -> ControllerConfig:
        calib = self.calibration or self.calibrate()
        c = self.controller_settings
        targets = plane_targets(calib, self.layout.near_diopter, self.layout.far_diopter, self.layout.count)
        spacing = float(np.min(np.abs(np.diff(targets))))
        self.config = ControllerConfig(
            targets=tuple(targets),
            trigger_window=c.trigger_window_fraction * spacing,
            dac_step=c.dac_step_levels,
            sample_rate_hz=c.sample_rate_hz,
            adc_bits=c.adc_bits,
            dac_bits=c.dac_bits,
            plane_display_time_s=c.bitplanes_per_trigger / self.display.bitplane_rate_hz,
            tracking_latency_s=c.tracking_latency_s,
            display_mode=c.display_mode,
            initial_dac_level=c.initial_dac_level,
        )
        return self.config

    def build_plant(self) -> LensPlant:
        return LensPlant.from_settings(self.plant_settings, self.dac, 1.0 / self.controller_settings.sample_rate_hz,
                                       initial_level=self.controller_settings.initial_dac_level)

    def run(self) -> pd.DataFrame:
        config = self.config or self.build_config()
        logger.info("simulating %.4f s at %.0f Hz, %d planes, %s mode", self.duration_s, config.sample_rate_hz,
                    config.plane_count, config.display_mode.value)
        self.trace = run_controller(self.build_plant(), self.geometry, config, self.duration_s, seed=self.seed,
                                    noise_enabled=self.noise_enabled)
        return self.trace

    def analyze(self, show: bool = True) -> TraceMetrics:
        if self.trace is None:
            self.run()
        c = self.controller_settings
        self.metrics = trace_metrics(self.trace, self.calibration, self.layout,
                                     bitplanes_per_trigger=c.bitplanes_per_trigger, bit_depth=self.display.bit_depth)
        if show:
            self.print_summary()
        return self.metrics

    def summary(self) -> dict:
        m = self.metrics
        quantum = AdcQuantizer(self.controller_settings.adc_bits).quantum
        return {
            "planes_per_second": m.planes_per_second,
            "frames_per_second": m.frames_per_second,
            "planes_per_frame": self.layout.count,
            "plane_budget": plane_budget(self.display),
            "worst_depth_error_diopter": m.worst_depth_error_diopter,
            "adc_quantum_diopter": abs(self.calibration.beta_diopter_per_ratio) * quantum,
            "missed_planes": len(m.missed_planes),
            "periods": len(m.sweeps),
            "saturated_samples": int(self.trace["saturated"].sum()),
        }

    def print_summary(self) -> None:
        s = self.summary()
        budget_ok = s["planes_per_second"] <= s["plane_budget"] * (1 + 1e-9)
        rows = [
            format_report_row("Planes per second", s["planes_per_second"], "1/s", budget_ok),
            format_report_row("Frames per second", s["frames_per_second"], "1/s"),
            format_report_row("Planes per frame", s["planes_per_frame"]),
            format_report_row("Plane budget", s["plane_budget"], "1/s"),
            format_report_row("Worst depth error", s["worst_depth_error_diopter"], "D"),
            format_report_row("ADC quantum", s["adc_quantum_diopter"], "D"),
            format_report_row("Missed planes", s["missed_planes"], "", s["missed_planes"] == 0),
            format_report_row("Complete periods", s["periods"]),
            format_report_row("Saturated samples", s["saturated_samples"]),
        ]
        print_report("Tracking simulation", rows)

    def save_trace(self, path: Path) -> Path:
        return write_csv(self.trace[TRACE_COLUMNS], path)

    def plot(self, path: Path, window_s: float = 0.1) -> Path:
        """DAC drive and PSD ratio over the first window_s seconds, with display triggers marked."""
        trace = self.trace[self.trace["t_s"] <= window_s]
        t_ms = trace["t_s"] * 1e3
        fig, ax_dac = plt.subplots(figsize=(12, 5))
        ax_dac.plot(t_ms, trace["dac_level"], color="tab:blue", label="DAC level")
        ax_dac.set_xlabel("time (ms)")
        ax_dac.set_ylabel("DAC level", color="tab:blue")
        ax_psd = ax_dac.twinx()
        ax_psd.plot(t_ms, trace["r"], color="tab:orange", label="PSD ratio r")
        fired = trace[trace["plane_index"] > 0]
        ax_psd.scatter(fired["t_s"] * 1e3, fired["r"], s=6, color="black", label="plane displayed")
        ax_psd.set_ylabel("PSD ratio r", color="tab:orange")
        mode = "hold" if self.controller_settings.display_mode is DisplayMode.HOLD else "continue"
        ax_dac.set_title(f"Focal-length tracking ({self.layout.count} planes, {mode} mode)")
        ax_dac.grid(True)
        fig.tight_layout()
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path)
        plt.close(fig)
        return path
