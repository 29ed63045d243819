import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from src.optics import PlaneLayout
from src.utils.exceptions import UsageError
from .stack import FocalStack

logger = logging.getLogger(__name__)


def spot_centers(count: int, rows: int, cols: int, cell_px: int) -> List[Tuple[int, int]]:
    """(row, col) pixel centers of the first `count` grid cells in row-major order."""
    return [((k // cols) * cell_px + cell_px // 2, (k % cols) * cell_px + cell_px // 2) for k in range(count)]


def psf_grid_scene(layout: PlaneLayout, rows: int, cols: int, spot_px: int, cell_px: int,
                   max_blur_px: Optional[float] = None) -> FocalStack:
    """
    One spot_px x spot_px square per plane, spot k on plane k, laid out row-major on a rows x cols grid.
    """
    if rows * cols < layout.count:
        raise UsageError(f"a {rows}x{cols} grid cannot hold {layout.count} spots")
    if spot_px > cell_px:
        raise UsageError(f"spot of {spot_px} px does not fit a {cell_px} px cell")
    if max_blur_px is not None and max_blur_px + spot_px > cell_px:
        logger.warning("spots overlap after maximal blur: %.1f px blur + %d px spot > %d px cell",
                       max_blur_px, spot_px, cell_px)
    shape = (rows * cell_px, cols * cell_px)
    planes = []
    for r, c in spot_centers(layout.count, rows, cols, cell_px):
        plane = np.zeros(shape)
        top, left = r - spot_px // 2, c - spot_px // 2
        plane[top:top + spot_px, left:left + spot_px] = 1.0
        planes.append(plane)
    return FocalStack(layout, planes)


def slit_scene(layout: PlaneLayout, plane_index: int, height: int, width: int, slit_px: int = 1,
               max_blur_px: float = 0.0) -> FocalStack:
    """
    Vertical line slit_px wide through the image center on one plane; every other plane is dark.
    Both sides grow past height x width when needed so the slit blurred by max_blur_px still fits.
    """
    if not 0 <= plane_index < layout.count:
        raise UsageError(f"plane index {plane_index} outside a {layout.count}-plane layout")
    extent = int(math.ceil(max_blur_px)) + slit_px + 1
    height, width = max(height, extent), max(width, extent)
    planes = [np.zeros((height, width)) for _ in range(layout.count)]
    left = width // 2 - slit_px // 2
    planes[plane_index][:, left:left + slit_px] = 1.0
    return FocalStack(layout, planes)
