import math
from typing import Dict, Any

import yaml

from src.control import PsdGeometry, distinguishable_configs
from src.optics import (DisplayModel, EyeModel, PlaneLayout, min_focal_planes, max_useful_planes,
                        plane_depth_of_field, accommodation_feasible, field_of_view, photometric_factors,
                        plane_budget, planes_per_frame, stack_capacity, worst_case_resolution,
                        in_focus_resolution, cycles_per_degree)
from src.utils.util_func import format_report_row, print_report
from .base_node import BaseNode, PipelineState


def plan_summary(s) -> Dict[str, Any]:
    display = DisplayModel.from_settings(s.display)
    eye = EyeModel.from_settings(s.eye)
    layout = PlaneLayout.from_settings(s.layout)
    a, d_e = eye.pupil_diameter_m, eye.retina_distance_m
    target = s.plan.target_cycles_per_degree * 180.0 / math.pi / d_e
    feasibility = accommodation_feasible(display, layout.near_diopter, layout.far_diopter) \
        if layout.count > 1 else None
    budget = plane_budget(display)
    worst = worst_case_resolution(display, eye, layout)
    photometric = photometric_factors(layout.count)
    return {
        "plane_count": layout.count,
        "range_diopter": layout.range_diopter,
        "n_min": min_focal_planes(a, d_e, target, layout.range_diopter),
        "n_max": max_useful_planes(display, a, layout.range_diopter) if layout.range_diopter > 0 else 1.0,
        "plane_depth_of_field_diopter": plane_depth_of_field(display, a),
        "feasible": feasibility.feasible if feasibility else True,
        "span_margin_diopter": feasibility.span_margin_diopter if feasibility else 0.0,
        "field_of_view_deg": math.degrees(field_of_view(display)),
        "duty_factor": photometric["duty_factor"],
        "dmd_energy_waste": photometric["dmd_energy_waste"],
        "plane_budget_per_s": budget,
        "planes_per_frame": planes_per_frame(budget, s.plan.frame_rate_hz),
        "stack_capacity": stack_capacity(s.display.memory_bitplanes, layout.count, display.bit_depth),
        "in_focus_cpd": cycles_per_degree(in_focus_resolution(display, eye), d_e),
        "worst_case_cpd": cycles_per_degree(worst["resolution_cycles_per_m"], d_e),
        "worst_case_focus_diopter": worst["focus_diopter"],
        "psd_configurations": distinguishable_configs(PsdGeometry.from_settings(s.psd), s.plan.psd_span_travel_m),
    }


class PlanNode(BaseNode):
    def __call__(self, state: PipelineState) -> Dict[str, Any]:
        s = self.settings(state)
        summary = plan_summary(s)
        enough = summary["plane_count"] >= math.ceil(summary["n_min"] - 1e-9)
        useful = summary["plane_count"] <= math.floor(summary["n_max"] + 1e-9)
        rows = [
            format_report_row("Planes", summary["plane_count"], "", enough and useful),
            format_report_row("Minimum planes", summary["n_min"], f"for {s.plan.target_cycles_per_degree:g} cpd"),
            format_report_row("Maximum useful planes", summary["n_max"]),
            format_report_row("Plane depth of field", summary["plane_depth_of_field_diopter"], "D"),
            format_report_row("Accommodation range", summary["range_diopter"], "D", summary["feasible"]),
            format_report_row("Field of view", summary["field_of_view_deg"], "deg"),
            format_report_row("Duty factor", summary["duty_factor"]),
            format_report_row("Plane budget", summary["plane_budget_per_s"], "1/s"),
            format_report_row("Planes per frame", summary["planes_per_frame"], f"at {s.plan.frame_rate_hz:g} fps"),
            format_report_row("Stacks in memory", summary["stack_capacity"]),
            format_report_row("In-focus resolution", summary["in_focus_cpd"], "cpd"),
            format_report_row("Worst-case resolution", summary["worst_case_cpd"], "cpd"),
            format_report_row("PSD configurations", summary["psd_configurations"]),
        ]
        print_report("Display plan", rows)
        path = self.out_dir(state) / "plan.yaml"
        with open(path, "w") as f:
            yaml.safe_dump({k: (v if isinstance(v, (bool, int)) else float(v)) for k, v in summary.items()}, f,
                           sort_keys=False)
        update = self.artifacts(plan=path)
        update["data"]["plan"] = summary
        return update
