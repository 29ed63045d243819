"""
Retinal images seen by an eye with a finite pupil, computed in display-pixel units.

Focal planes are additive: each plane is blurred by its own defocus disc and the results are summed.
"""
import logging

import numpy as np

from src.optics import DisplayModel, EyeModel
from .kernels import blur_diameter_px, disc_blur
from .stack import FocalStack, Scene

logger = logging.getLogger(__name__)


def render_from_stack(stack: FocalStack, eye: EyeModel, display: DisplayModel, oversample: int = 1) -> np.ndarray:
    out = np.zeros(stack.shape)
    # fixed layout order keeps the sum reproducible
    for depth, plane in zip(stack.layout.depths_diopter, stack.planes):
        if not np.any(plane):
            continue
        out += disc_blur(plane, blur_diameter_px(eye, depth, display, oversample))
    return np.maximum(out, 0.0)


def render_ground_truth(scene: Scene, eye: EyeModel, display: DisplayModel, oversample: int = 1) -> np.ndarray:
    """
    Every source pixel splats its radiance over the disc of its own depth. Pixels sharing a depth are
    blurred together, nearest depth first, which reproduces render_from_stack on plane-quantized scenes.
    """
    out = np.zeros(scene.image.shape)
    depths = np.unique(scene.depth_map)[::-1]
    for depth in depths:
        mask = scene.depth_map == depth
        if scene.image.ndim == 3:
            mask = mask[:, :, None]
        layer = np.where(mask, scene.image, 0.0)
        out += disc_blur(layer, blur_diameter_px(eye, float(depth), display, oversample))
    logger.debug("ground truth at %.3f D used %d depth layers", eye.focus_diopter, len(depths))
    return np.maximum(out, 0.0)
