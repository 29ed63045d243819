from .models import DisplayModel, EyeModel, PlaneLayout
from .analytics import (virtual_image_diopter,
                        lens_power_for_depth,
                        in_focus_resolution,
                        focus_threshold_diopter,
                        plane_bandwidth,
                        perceived_resolution,
                        cycles_per_degree,
                        worst_case_resolution,
                        min_focal_planes,
                        plane_depth_of_field,
                        max_useful_planes,
                        FeasibilityReport,
                        accommodation_feasible,
                        field_of_view,
                        photometric_factors,
                        plane_budget,
                        controller_plane_budget,
                        planes_per_frame,
                        stack_capacity)

__all__ = [
    'DisplayModel',
    'EyeModel',
    'PlaneLayout',
    'virtual_image_diopter',
    'lens_power_for_depth',
    'in_focus_resolution',
    'focus_threshold_diopter',
    'plane_bandwidth',
    'perceived_resolution',
    'cycles_per_degree',
    'worst_case_resolution',
    'min_focal_planes',
    'plane_depth_of_field',
    'max_useful_planes',
    'FeasibilityReport',
    'accommodation_feasible',
    'field_of_view',
    'photometric_factors',
    'plane_budget',
    'controller_plane_budget',
    'planes_per_frame',
    'stack_capacity',
]
