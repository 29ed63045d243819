"""
Closed-form design equations for a multifocal display built from a fixed panel and a focus-tunable lens.

Depths are diopters throughout; 0 means optical infinity. Retinal resolutions are cycles per meter on
the retina unless a function says otherwise.
"""
import math
from typing import Dict

import numpy as np
from pydantic import BaseModel

from src.utils.exceptions import OpticsDomainError, RealImageError
from .models import DisplayModel, EyeModel, PlaneLayout

FEASIBILITY_TOLERANCE = 1e-9


def virtual_image_diopter(display: DisplayModel, lens_power_diopter: float) -> float:
    """Depth of the focal plane created by lens power D_x: 1/v = 1/d_o - D_x."""
    if lens_power_diopter <= 0:
        raise OpticsDomainError(f"lens power must be > 0 diopters, got {lens_power_diopter}")
    if lens_power_diopter > display.display_diopter:
        raise RealImageError(
            f"lens power {lens_power_diopter} D exceeds 1/d_o = {display.display_diopter:.6f} D, "
            f"the image would be real")
    return display.display_diopter - lens_power_diopter


def lens_power_for_depth(display: DisplayModel, depth_diopter: float) -> float:
    if depth_diopter < 0:
        raise OpticsDomainError(f"focal-plane depth must be >= 0 diopters, got {depth_diopter}")
    return display.display_diopter - depth_diopter


def in_focus_resolution(display: DisplayModel, eye: EyeModel) -> float:
    """d_o / (2 d_e dx), the display-limited retinal bandwidth."""
    return display.display_distance_m / (2.0 * eye.retina_distance_m * display.pixel_pitch_m)


def focus_threshold_diopter(display: DisplayModel, eye: EyeModel) -> float:
    """Mismatch below which a focal plane still appears at full display resolution."""
    return display.pixel_pitch_m / (eye.pupil_diameter_m * display.display_distance_m)


def plane_bandwidth(display: DisplayModel, eye: EyeModel, plane_diopter: float) -> float:
    """Half-maximum retinal bandwidth W of a single plane seen by an eye focused at eye.focus_diopter."""
    mismatch = abs(eye.focus_diopter - plane_diopter)
    if mismatch <= focus_threshold_diopter(display, eye):
        return in_focus_resolution(display, eye)
    return 1.0 / (2.0 * eye.pupil_diameter_m * eye.retina_distance_m * mismatch)


def perceived_resolution(display: DisplayModel, eye: EyeModel, layout: PlaneLayout) -> float:
    best = max(plane_bandwidth(display, eye, depth) for depth in layout.depths_diopter)
    return min(in_focus_resolution(display, eye), best)


def cycles_per_degree(cycles_per_meter: float, retina_distance_m: float) -> float:
    return cycles_per_meter * retina_distance_m * math.pi / 180.0


def worst_case_resolution(display: DisplayModel, eye: EyeModel, layout: PlaneLayout) -> Dict[str, float]:
    """
    Lowest perceived resolution over the accommodation range of the layout.
    For a layout uniform in diopters the minimum sits halfway between adjacent planes.
    """
    depths = layout.as_array()
    candidates = [float(d) for d in depths]
    candidates += [float(0.5 * (a + b)) for a, b in zip(depths[:-1], depths[1:])]
    values = {focus: perceived_resolution(display, eye.focused_at(focus), layout) for focus in candidates}
    focus = min(values, key=values.get)
    return {"focus_diopter": focus, "resolution_cycles_per_m": values[focus]}


def min_focal_planes(a: float, d_e: float, target_resolution: float, range_diopter: float) -> float:
    """n = a d_e (1/v_a - 1/v_b) F. Callers take the ceiling."""
    if min(a, d_e, target_resolution, range_diopter) < 0:
        raise OpticsDomainError("min_focal_planes arguments must be >= 0")
    return a * d_e * range_diopter * target_resolution


def plane_depth_of_field(display: DisplayModel, a: float) -> float:
    """2 dx / (a d_o), in diopters."""
    if a <= 0:
        raise OpticsDomainError(f"pupil diameter must be > 0, got {a}")
    return 2.0 * display.pixel_pitch_m / (a * display.display_distance_m)


def max_useful_planes(display: DisplayModel, a: float, range_diopter: float) -> float:
    """Planes beyond this count overlap their depth of field and add no resolution."""
    if a <= 0 or range_diopter <= 0:
        raise OpticsDomainError("max_useful_planes arguments must be > 0")
    return range_diopter * a * display.display_distance_m / (2.0 * display.pixel_pitch_m)


class FeasibilityReport(BaseModel):
    feasible: bool
    span_margin_diopter: float
    near_margin_diopter: float
    far_margin_diopter: float


def accommodation_feasible(display: DisplayModel, near_diopter: float, far_diopter: float) -> FeasibilityReport:
    """
    Every target depth t in [far, near] needs a lens power 1/d_o - t inside [D_1, D_2]:
    D_1 <= 1/d_o - near and 1/d_o - far <= D_2.
    Margins are in diopters; negative means violated.
    """
    if not near_diopter > far_diopter >= 0:
        raise OpticsDomainError(f"need near > far >= 0, got near={near_diopter}, far={far_diopter}")
    d1, d2 = display.lens_power_min_diopter, display.lens_power_max_diopter
    inv_do = display.display_diopter
    span_margin = (d2 - d1) - (near_diopter - far_diopter)
    near_margin = (inv_do - near_diopter) - d1
    far_margin = d2 - (inv_do - far_diopter)
    feasible = min(span_margin, near_margin, far_margin) >= -FEASIBILITY_TOLERANCE
    return FeasibilityReport(feasible=feasible,
                             span_margin_diopter=span_margin,
                             near_margin_diopter=near_margin,
                             far_margin_diopter=far_margin)


def field_of_view(display: DisplayModel) -> float:
    """Radians, eye placed at the tunable lens."""
    return 2.0 * math.atan(display.panel_width_m / (2.0 * display.display_distance_m))


def photometric_factors(n_planes: int) -> Dict[str, float]:
    if n_planes < 1:
        raise OpticsDomainError(f"plane count must be >= 1, got {n_planes}")
    return {"duty_factor": 1.0 / n_planes, "dmd_energy_waste": (n_planes - 1) / n_planes}


def plane_budget(display: DisplayModel) -> float:
    """Upper bound on full-depth planes per second."""
    return display.bitplane_rate_hz / display.bit_depth


def controller_plane_budget(bitplane_latency_s: float, bit_depth: int) -> float:
    """Plane rate of a display controller that needs bitplane_latency_s per bitplane."""
    if bitplane_latency_s <= 0 or bit_depth < 1:
        raise OpticsDomainError("latency must be > 0 and bit depth >= 1")
    return 1.0 / (bitplane_latency_s * bit_depth)


def planes_per_frame(planes_per_second: float, frames_per_second: float) -> int:
    if frames_per_second <= 0:
        raise OpticsDomainError(f"frame rate must be > 0, got {frames_per_second}")
    return int(np.floor(planes_per_second / frames_per_second + 1e-9))


def stack_capacity(memory_bitplanes: int, n_planes: int, bit_depth: int) -> int:
    """Focal stacks that fit in a controller memory holding memory_bitplanes binary patterns."""
    if n_planes < 1 or bit_depth < 1:
        raise OpticsDomainError("plane count and bit depth must be >= 1")
    return memory_bitplanes // (n_planes * bit_depth)
