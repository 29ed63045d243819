"""
Position sensing detector readout: spot position from lens power, the two anode currents and their
normalized difference r, which is affine in the lens power.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.utils.exceptions import PsdRangeError
from .models import CalibrationResult, PsdGeometry

# tolerance on the floor of travel / precision
COUNT_EPS = 1e-9


@dataclass(frozen=True)
class PsdReading:
    h_m: float
    i1: float
    i2: float
    r: float


def psd_read(true_power_diopter: float, geom: PsdGeometry, noise_seed: Optional[int] = None,
             rng: Optional[np.random.Generator] = None) -> PsdReading:
    """
    Read the detector for a lens at true_power_diopter. Currents are normalized to a unit total.
    With a noise_seed or an rng, uniform position noise of width psd_precision_m is added to the spot
    before the ratio is formed; with neither the reading is exact.
    """
    h = geom.spot_offset(true_power_diopter)
    if rng is None and noise_seed is not None:
        rng = np.random.default_rng(noise_seed)
    if rng is not None:
        h += geom.psd_precision_m * (rng.random() - 0.5)
    half = geom.psd_length_m / 2.0
    if abs(h) > half:
        raise PsdRangeError(f"spot at {h * 1e3:.4f} mm falls off the {geom.psd_length_m * 1e3:.1f} mm detector "
                            f"(lens power {true_power_diopter:.4f} D)")
    r = h / half
    return PsdReading(h_m=h, i1=(1.0 - r) / 2.0, i2=(1.0 + r) / 2.0, r=r)


def geometry_calibration(geom: PsdGeometry, display_distance_m: float) -> CalibrationResult:
    """Exact alpha and beta implied by the tracking geometry and the display distance."""
    alpha = 1.0 / display_distance_m - 1.0 / geom.psd_distance_m
    beta = -geom.psd_length_m / (2.0 * geom.beam_offset_m * geom.psd_distance_m)
    return CalibrationResult(alpha_diopter=alpha, beta_diopter_per_ratio=beta)


def distinguishable_configs(geom: PsdGeometry, span_travel_m: float) -> int:
    """Number of lens configurations the detector resolves over a spot travel of span_travel_m."""
    if span_travel_m <= 0:
        raise PsdRangeError(f"spot travel must be > 0, got {span_travel_m}")
    if span_travel_m > geom.psd_length_m:
        raise PsdRangeError(f"spot travel {span_travel_m} m exceeds the detector length {geom.psd_length_m} m")
    return int(np.floor(span_travel_m / geom.psd_precision_m + COUNT_EPS))
