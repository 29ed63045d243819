import logging
from typing import Dict, Any, Sequence, Tuple

import pandas as pd
import yaml

from src.data import load_stack, write_image
from src.optics import DisplayModel, EyeModel, PlaneLayout
from src.renderer import (FocalStack, blur_diameter_px, psf_grid_scene, render_from_stack, slit_scene,
                          spot_centers)
from src.utils.constants import RENDER_INDEX_COLUMNS, TARGETS_MANIFEST
from src.utils.exceptions import UsageError
from src.utils.settings import Settings
from src.utils.util_func import parse_focus_spec, write_csv
from .base_node import BaseNode, PipelineState

logger = logging.getLogger(__name__)

SLIT_HEIGHT = 64
SLIT_WIDTH = 256


def parse_grid(spec: str) -> Tuple[int, int]:
    try:
        rows, cols = (int(v) for v in spec.lower().split("x"))
    except ValueError:
        raise UsageError(f"grid must look like <rows>x<cols>, got '{spec}'")
    if rows < 1 or cols < 1:
        raise UsageError(f"grid dimensions must be >= 1, got '{spec}'")
    return rows, cols


def build_target(args: Dict[str, Any], s: Settings, focuses: Sequence[float]) -> Tuple[FocalStack, Dict[str, Any]]:
    """
    The stack to render and the targets description that analyze needs to measure it.
    Only slit targets are drawn on the render.oversample grid, sized to hold the slit at every focus.
    """
    layout = PlaneLayout.from_settings(s.layout)
    display = DisplayModel.from_settings(s.display)
    eye = EyeModel.from_settings(s.eye)
    chosen = [k for k in ("stack", "psf_grid", "slit") if args.get(k) is not None]
    if len(chosen) != 1:
        raise UsageError("render needs exactly one of --stack, --psf-grid or --slit")
    oversample = s.render.oversample
    if args.get("stack") is not None:
        return load_stack(args["stack"]), {"kind": "stack", "oversample": 1}
    if args.get("psf_grid") is not None:
        rows, cols = parse_grid(args["psf_grid"]) if args["psf_grid"] \
            else (s.render.psf_grid_rows, s.render.psf_grid_cols)
        cell = s.render.cell_px
        max_blur = max(blur_diameter_px(eye.focused_at(f), d, display)
                       for f in (layout.far_diopter, layout.near_diopter) for d in layout.depths_diopter)
        stack = psf_grid_scene(layout, rows, cols, s.render.spot_px, cell, max_blur_px=max_blur)
        centers = spot_centers(layout.count, rows, cols, cell)
        return stack, {"kind": "psf_grid", "rows": rows, "cols": cols, "cell_px": cell,
                       "spot_px": s.render.spot_px, "oversample": 1,
                       "centers": [[int(r), int(c)] for r, c in centers],
                       "depths_diopter": [float(d) for d in layout.depths_diopter]}
    plane = int(args["slit"])
    if not 0 <= plane < layout.count:
        raise UsageError(f"plane index {plane} outside a {layout.count}-plane layout")
    max_blur = max(blur_diameter_px(eye.focused_at(f), layout.depths_diopter[plane], display, oversample)
                   for f in focuses)
    stack = slit_scene(layout, plane, SLIT_HEIGHT * oversample, SLIT_WIDTH * oversample, slit_px=oversample,
                       max_blur_px=max_blur)
    return stack, {"kind": "slit", "plane_index": plane, "plane_diopter": float(layout.depths_diopter[plane]),
                   "oversample": oversample}


class RenderNode(BaseNode):
    """Retinal images of a stack over a focus sweep, one PNG per focus plus an index CSV."""

    def __call__(self, state: PipelineState) -> Dict[str, Any]:
        s = self.settings(state)
        args = self.args(state)
        display = DisplayModel.from_settings(s.display)
        eye = EyeModel.from_settings(s.eye)
        focuses = parse_focus_spec(args.get("focus") or s.render.focus_sweep)
        stack, targets = build_target(args, s, focuses)

        render_dir = self.out_dir(state) / "render"
        rows = []
        for k, focus in enumerate(focuses):
            image = render_from_stack(stack, eye.focused_at(focus), display, oversample=targets["oversample"])
            name = f"focus_{k:03d}.png"
            write_image(render_dir / name, image)
            rows.append([focus, name])
        logger.info("rendered %d focus settings", len(focuses))

        index_path = write_csv(pd.DataFrame(rows, columns=RENDER_INDEX_COLUMNS), render_dir / "render_index.csv")
        targets_path = render_dir / TARGETS_MANIFEST
        with open(targets_path, "w") as f:
            yaml.safe_dump(targets, f, sort_keys=False)
        return self.artifacts(render=render_dir, render_index=index_path, targets=targets_path)
