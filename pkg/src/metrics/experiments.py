"""
End-to-end measurements on rendered targets: blur diameter against plane depth on a PSF grid, and
slit MTFs for displays with coarser plane spacing emulated on a dense layout.
"""
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.optics import DisplayModel, EyeModel, PlaneLayout
from src.renderer import blur_diameter_px, psf_grid_scene, render_from_stack, slit_scene, spot_centers
from src.utils.constants import SPOT_COLUMNS
from .blur import estimate_blur_diameter
from .fitting import LinearFit, linear_fit
from .mtf import MtfCurve, mtf_from_slit

logger = logging.getLogger(__name__)


def measure_spots(image: np.ndarray, centers: Sequence[Tuple[int, int]], depths: Sequence[float],
                  focus_diopter: float, cell_px: int, reliability_floor_px: float = 3.0) -> pd.DataFrame:
    rows = []
    for k, (center, depth) in enumerate(zip(centers, depths)):
        estimate = estimate_blur_diameter(image, center, window=cell_px // 2,
                                          reliability_floor_px=reliability_floor_px)
        rows.append([focus_diopter, k, depth, estimate.diameter_px, estimate.confidence])
    return pd.DataFrame(rows, columns=SPOT_COLUMNS)


def fit_reliable_spots(spots: pd.DataFrame) -> LinearFit:
    reliable = spots[spots["confidence"] == "ok"]
    return linear_fit(reliable["plane_diopter"].to_numpy(), reliable["diameter_px"].to_numpy())


def blur_linearity_experiment(display: DisplayModel, eye: EyeModel, layout: PlaneLayout, rows: int, cols: int,
                              spot_px: int = 1, cell_px: int = 96,
                              reliability_floor_px: float = 3.0) -> Tuple[pd.DataFrame, LinearFit]:
    """
    Render one spot per plane, measure every spot's blur diameter with the eye at eye.focus_diopter and
    fit diameter against plane depth over the spots above the reliability floor.
    """
    max_blur = max(blur_diameter_px(eye, d, display) for d in layout.depths_diopter)
    stack = psf_grid_scene(layout, rows, cols, spot_px, cell_px, max_blur_px=max_blur)
    image = render_from_stack(stack, eye, display)
    spots = measure_spots(image, spot_centers(layout.count, rows, cols, cell_px), layout.depths_diopter,
                          eye.focus_diopter, cell_px, reliability_floor_px)
    fit = fit_reliable_spots(spots)
    logger.info("blur linearity: %d reliable spots, slope %.3f px/D, R^2 %.5f",
                int((spots["confidence"] == "ok").sum()), fit.slope, fit.r_squared)
    return spots, fit


def worst_case_focus(layout: PlaneLayout, plane_index: int, plane_count: int) -> float:
    """Eye focus halfway between plane_index and its neighbour on an evenly spaced plane_count display."""
    spacing = layout.range_diopter / (plane_count - 1)
    depth = layout.depths_diopter[plane_index]
    focus = depth - spacing / 2.0
    return focus if focus >= 0 else depth + spacing / 2.0


def inter_plane_mtf_experiment(display: DisplayModel, eye: EyeModel, layout: PlaneLayout,
                               plane_counts: Sequence[int] = (40, 30, 20, 4), plane_index: int = 4,
                               oversample: int = 4, height: int = 64, width: int = 256,
                               pad: int = 4096) -> Dict[Optional[int], MtfCurve]:
    """
    Slit on one plane of the dense layout, viewed at the worst-case focus of sparser displays with the
    same depth range. Key None holds the in-focus curve. Rendering happens on a grid oversample times
    finer than the panel; height and width are in display pixels and grow to hold the widest blur.
    Frequencies are reported in cycles per display pixel.
    """
    focuses: List[Tuple[Optional[int], float]] = [(None, layout.depths_diopter[plane_index])]
    focuses += [(n, worst_case_focus(layout, plane_index, n)) for n in plane_counts]
    max_blur = max(blur_diameter_px(eye.focused_at(f), layout.depths_diopter[plane_index], display, oversample)
                   for _, f in focuses)
    stack = slit_scene(layout, plane_index, height * oversample, width * oversample, slit_px=oversample,
                       max_blur_px=max_blur)
    curves: Dict[Optional[int], MtfCurve] = {}
    for count, focus in focuses:
        image = render_from_stack(stack, eye.focused_at(focus), display, oversample=oversample)
        curves[count] = mtf_from_slit(image, axis=0, pad=pad, samples_per_pixel=oversample)
        logger.info("slit MTF50 for %s planes at %.4f D: %.4f cycles/px",
                    "in-focus" if count is None else count, focus, curves[count].mtf50)
    return curves
