import numpy as np

from src.optics import PlaneLayout
from src.renderer import FocalStack, Scene
from .base_filter import BaseFilter


def linear_weights(depth_map: np.ndarray, layout: PlaneLayout):
    """
    Triangle-filter split of every pixel between its bracketing planes.
    Returns (near_index, near_weight); the far plane is near_index + 1 with weight 1 - near_weight.
    Depths outside the layout clamp to the extreme plane with weight 1.
    """
    depths = layout.as_array()
    n = layout.count
    if n == 1:
        return np.zeros(depth_map.shape, dtype=int), np.ones(depth_map.shape)
    # planes at or nearer than the pixel, minus one, is the bracketing near plane
    near = np.clip(np.sum(depth_map[..., None] <= depths, axis=-1) - 1, 0, n - 2)
    d_near, d_far = depths[near], depths[near + 1]
    weight = (depth_map - d_far) / (d_near - d_far)
    return near, np.clip(weight, 0.0, 1.0)


def assign_linear(scene: Scene, layout: PlaneLayout) -> FocalStack:
    """
    Split radiance linearly in diopters between the two bracketing planes.
    The larger share is computed as a product and the smaller one as the exact remainder,
    so the planes sum back to the scene bit for bit.
    """
    near, weight = linear_weights(scene.depth_map, layout)
    far = near + 1
    near_is_big = weight >= 0.5
    big_index = np.where(near_is_big, near, far)
    small_index = np.where(near_is_big, far, near)
    share = np.maximum(weight, 1.0 - weight)
    if scene.image.ndim == 3:
        big_index, small_index, share = big_index[:, :, None], small_index[:, :, None], share[:, :, None]
    big = scene.image * share
    small = scene.image - big
    planes = []
    for i in range(layout.count):
        plane = np.where(big_index == i, big, 0.0)
        plane = np.where(small_index == i, small, plane)
        planes.append(plane)
    return FocalStack(layout, planes)


class LinearFilter(BaseFilter):
    def __call__(self, scene: Scene, layout: PlaneLayout) -> FocalStack:
        return assign_linear(scene, layout)
