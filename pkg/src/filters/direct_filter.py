import numpy as np

from src.optics import PlaneLayout
from src.renderer import FocalStack, Scene
from .base_filter import BaseFilter


def nearest_plane_index(depth_map: np.ndarray, layout: PlaneLayout) -> np.ndarray:
    """Index of the plane nearest in diopters; ties go to the lower index (the nearer plane)."""
    distance = np.abs(depth_map[..., None] - layout.as_array())
    return np.argmin(distance, axis=-1)


def assign_direct(scene: Scene, layout: PlaneLayout) -> FocalStack:
    index = nearest_plane_index(scene.depth_map, layout)
    if scene.image.ndim == 3:
        index = index[:, :, None]
    planes = [np.where(index == i, scene.image, 0.0) for i in range(layout.count)]
    return FocalStack(layout, planes)


class DirectFilter(BaseFilter):
    def __call__(self, scene: Scene, layout: PlaneLayout) -> FocalStack:
        return assign_direct(scene, layout)
