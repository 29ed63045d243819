import math

import numpy as np
import pytest

from src.optics import (DisplayModel, EyeModel, PlaneLayout, virtual_image_diopter, perceived_resolution,
                        in_focus_resolution, focus_threshold_diopter, worst_case_resolution, min_focal_planes,
                        max_useful_planes, plane_depth_of_field, accommodation_feasible, field_of_view,
                        photometric_factors, plane_budget, controller_plane_budget, planes_per_frame,
                        stack_capacity, cycles_per_degree)
from src.utils.exceptions import RealImageError, OpticsDomainError

display = DisplayModel(pixel_pitch_m=13.6e-6, display_distance_m=0.07)
eye = EyeModel(pupil_diameter_m=0.004, retina_distance_m=0.017)


def test_virtual_image_diopter():
    assert virtual_image_diopter(display, 1 / 0.07) == 0.0
    assert virtual_image_diopter(display, 10.2857) == pytest.approx(4.0, abs=1e-4)
    with pytest.raises(RealImageError):
        virtual_image_diopter(display, 14.30)
    with pytest.raises(OpticsDomainError):
        virtual_image_diopter(display, 0.0)


def test_perceived_resolution_branches():
    bound = in_focus_resolution(display, eye)
    assert bound == pytest.approx(0.07 / (2 * 0.017 * 13.6e-6))

    layout = PlaneLayout(depths_diopter=(2.0,))
    assert perceived_resolution(display, eye.focused_at(2.0), layout) == pytest.approx(bound)
    assert perceived_resolution(display, eye.focused_at(3.0), layout) == pytest.approx(7352.94, rel=1e-4)

    threshold = focus_threshold_diopter(display, eye)
    at_edge = perceived_resolution(display, eye.focused_at(2.0 + threshold), layout)
    assert at_edge == pytest.approx(bound)
    assert 1 / (2 * 0.004 * 0.017 * threshold) == pytest.approx(bound)


def test_perceived_resolution_properties():
    layout = PlaneLayout.uniform(4.0, 0.0, 5)
    focuses = np.linspace(0.0, 4.0, 401)
    bound = in_focus_resolution(display, eye)
    values = [perceived_resolution(display, eye.focused_at(f), layout) for f in focuses]
    assert max(values) <= bound * (1 + 1e-12)

    # moving away from the plane at 2 D towards the midpoint never raises resolution
    single = PlaneLayout(depths_diopter=(2.0,))
    sweep = [perceived_resolution(display, eye.focused_at(2.0 + m), single) for m in np.linspace(0, 1.5, 50)]
    assert all(b <= a + 1e-9 for a, b in zip(sweep, sweep[1:]))


def test_worst_case_resolution_uniform_layout():
    layout = PlaneLayout.uniform(4.0, 0.0, 40)
    spacing = 4.0 / 39
    worst = worst_case_resolution(display, eye, layout)
    expected = min(in_focus_resolution(display, eye), 1 / (2 * 0.004 * 0.017 * spacing / 2))
    assert worst["resolution_cycles_per_m"] == pytest.approx(expected)
    assert cycles_per_degree(worst["resolution_cycles_per_m"], 0.017) > 0


def test_min_focal_planes():
    f = 30 * 180 / math.pi
    assert min_focal_planes(0.004, 1.0, f, 4.0) == pytest.approx(27.5, abs=0.1)
    assert min_focal_planes(0.004, 0.017, 0.0, 4.0) == 0.0
    assert min_focal_planes(0.004, 1.0, f, 2.0) == pytest.approx(min_focal_planes(0.004, 1.0, f, 4.0) / 2)


def test_max_useful_planes():
    assert max_useful_planes(display, 0.004, 14.2857) == pytest.approx(147, abs=1)
    assert max_useful_planes(display, 0.004, 4.0) == pytest.approx(41.2, abs=0.1)
    dof = plane_depth_of_field(display, 0.004)
    assert dof == pytest.approx(0.0971, abs=1e-4)
    for rng in (1.0, 4.0, 14.2857):
        assert max_useful_planes(display, 0.004, rng) * dof == pytest.approx(rng, rel=1e-12)


def test_accommodation_feasible():
    proto = DisplayModel(pixel_pitch_m=13.6e-6, display_distance_m=0.07,
                         lens_power_min_diopter=8.3, lens_power_max_diopter=20.0)
    report = accommodation_feasible(proto, 4.0, 0.0)
    assert report.feasible
    assert report.span_margin_diopter == pytest.approx(7.7)

    short = DisplayModel(pixel_pitch_m=13.6e-6, display_distance_m=0.07,
                         lens_power_min_diopter=10.0, lens_power_max_diopter=13.0)
    assert not accommodation_feasible(short, 4.0, 0.0).feasible

    edge = DisplayModel(pixel_pitch_m=13.6e-6, display_distance_m=0.05,
                        lens_power_min_diopter=16.0, lens_power_max_diopter=20.0)
    report = accommodation_feasible(edge, 4.0, 0.0)
    assert report.feasible
    assert report.span_margin_diopter == pytest.approx(0.0, abs=1e-9)
    assert report.far_margin_diopter == pytest.approx(0.0, abs=1e-9)


def test_accommodation_margins_bound_both_ends_of_the_range():
    proto = DisplayModel(pixel_pitch_m=13.6e-6, display_distance_m=0.07,
                         lens_power_min_diopter=8.3, lens_power_max_diopter=20.0)
    report = accommodation_feasible(proto, 4.0, 0.0)
    assert report.near_margin_diopter == pytest.approx(1 / 0.07 - 4.0 - 8.3)
    assert report.far_margin_diopter == pytest.approx(20.0 - 1 / 0.07)

    # a nonzero far depth relaxes the far bound only
    raised = accommodation_feasible(proto, 4.0, 1.0)
    assert raised.near_margin_diopter == pytest.approx(report.near_margin_diopter)
    assert raised.far_margin_diopter == pytest.approx(report.far_margin_diopter + 1.0)

    # lens reaches 4 D but not optical infinity
    weak = DisplayModel(pixel_pitch_m=13.6e-6, display_distance_m=0.07,
                        lens_power_min_diopter=8.3, lens_power_max_diopter=13.0)
    report = accommodation_feasible(weak, 4.0, 0.0)
    assert not report.feasible
    assert report.near_margin_diopter > 0
    assert report.far_margin_diopter == pytest.approx(13.0 - 1 / 0.07)


def test_accommodation_feasible_shift_invariance():
    base = accommodation_feasible(display, 4.0, 0.0)
    c = 1.5
    shifted_display = DisplayModel(pixel_pitch_m=13.6e-6, display_distance_m=1 / (1 / 0.07 + c),
                                   lens_power_min_diopter=8.3 + c, lens_power_max_diopter=20.0 + c)
    shifted = accommodation_feasible(shifted_display, 4.0, 0.0)
    assert shifted.feasible == base.feasible
    assert shifted.near_margin_diopter == pytest.approx(base.near_margin_diopter)
    assert shifted.far_margin_diopter == pytest.approx(base.far_margin_diopter)


def test_field_of_view():
    square = DisplayModel(pixel_pitch_m=13.6e-6, display_distance_m=0.07, panel_width_m=0.14)
    assert field_of_view(square) == pytest.approx(math.pi / 2)
    flat = DisplayModel(pixel_pitch_m=13.6e-6, display_distance_m=0.07, panel_width_m=0.0)
    assert field_of_view(flat) == 0.0
    wide = DisplayModel(pixel_pitch_m=13.6e-6, display_distance_m=0.07, panel_width_m=0.058)
    assert math.degrees(field_of_view(wide)) == pytest.approx(45.0, abs=0.5)


def test_photometric_factors():
    assert photometric_factors(1) == {"duty_factor": 1.0, "dmd_energy_waste": 0.0}
    factors = photometric_factors(40)
    assert factors["duty_factor"] == pytest.approx(0.025)
    assert factors["dmd_energy_waste"] == pytest.approx(0.975)


def test_plane_budgets():
    assert plane_budget(display) == pytest.approx(2500)
    one_bit = DisplayModel(pixel_pitch_m=13.6e-6, display_distance_m=0.07, bit_depth=1)
    assert plane_budget(one_bit) == pytest.approx(20000)
    slow = DisplayModel(pixel_pitch_m=13.6e-6, display_distance_m=0.07, bitplane_rate_hz=12500)
    assert plane_budget(slow) == pytest.approx(1562.5)
    assert controller_plane_budget(80e-6, 8) == pytest.approx(1562.5)


def test_frame_tradeoff_and_storage():
    assert planes_per_frame(1600, 40) == 40
    assert planes_per_frame(1600, 60) == 26
    assert stack_capacity(43520, 40, 8) == 136
