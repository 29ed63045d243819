from typing import Dict, Any

import numpy as np
import pandas as pd

from src.data import load_scene, save_stack
from src.filters import BaseFilter, OptimizedFilter
from src.optics import DisplayModel, EyeModel, PlaneLayout
from src.utils.constants import FilterMethod, OBJECTIVE_COLUMNS
from src.utils.exceptions import UsageError
from src.utils.settings import Settings
from src.utils.util_func import import_filter_class, write_csv
from .base_node import BaseNode, PipelineState


def build_filter(method: FilterMethod, s: Settings) -> BaseFilter:
    filter_class = import_filter_class(method.class_path())
    if filter_class is OptimizedFilter:
        layout = PlaneLayout.from_settings(s.layout)
        focus_samples = np.linspace(layout.far_diopter, layout.near_diopter, s.optimize.focus_samples).tolist()
        return OptimizedFilter(EyeModel.from_settings(s.eye), DisplayModel.from_settings(s.display),
                               focus_samples, opts=s.optimize, seed=s.seed)
    return filter_class()


class FilterNode(BaseNode):
    """Decompose a scene into a focal stack and write it as a stack directory."""

    def __call__(self, state: PipelineState) -> Dict[str, Any]:
        s = self.settings(state)
        args = self.args(state)
        if not args.get("image") or not args.get("depth"):
            raise UsageError("filter needs --image and --depth")
        scene = load_scene(args["image"], args["depth"], depth_units=args.get("depth_units", "diopter"))
        method = FilterMethod.from_string(args.get("method", "linear"))
        depth_filter = build_filter(method, s)
        stack = depth_filter(scene, PlaneLayout.from_settings(s.layout))

        out_dir = self.out_dir(state)
        paths = {"stack": save_stack(stack, out_dir / "stack")}
        if isinstance(depth_filter, OptimizedFilter):
            objectives = pd.DataFrame({OBJECTIVE_COLUMNS[0]: np.arange(len(depth_filter.objectives)),
                                       OBJECTIVE_COLUMNS[1]: depth_filter.objectives})
            paths["objectives"] = write_csv(objectives, out_dir / "objectives.csv")
        return self.artifacts(**paths)
