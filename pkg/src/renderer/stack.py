from dataclasses import dataclass, field
from typing import List

import numpy as np

from src.optics import PlaneLayout
from src.utils.exceptions import DimensionMismatchError, NonFiniteDepthError


@dataclass
class Scene:
    """All-in-focus image in [0, 1] (H x W or H x W x 3) and a depth map in diopters (H x W)."""
    image: np.ndarray
    depth_map: np.ndarray

    def __post_init__(self):
        self.image = np.asarray(self.image, dtype=np.float64)
        self.depth_map = np.asarray(self.depth_map, dtype=np.float64)
        if self.image.ndim not in (2, 3) or (self.image.ndim == 3 and self.image.shape[2] not in (1, 3)):
            raise DimensionMismatchError(f"scene image must be HxW or HxWx3, got {self.image.shape}")
        if self.image.shape[:2] != self.depth_map.shape:
            raise DimensionMismatchError(
                f"image is {self.image.shape[:2]} but depth map is {self.depth_map.shape}")
        if not np.all(np.isfinite(self.depth_map)):
            raise NonFiniteDepthError("depth map contains non-finite values")
        if np.any(self.depth_map < 0):
            raise NonFiniteDepthError("depth map contains negative diopters")
        if np.any(self.image < 0) or np.any(self.image > 1):
            raise ValueError("scene radiance must lie in [0, 1]")

    @property
    def shape(self):
        return self.depth_map.shape

    @property
    def channels(self) -> int:
        return 1 if self.image.ndim == 2 else self.image.shape[2]

    def channel(self, c: int) -> np.ndarray:
        return self.image if self.image.ndim == 2 else self.image[:, :, c]


@dataclass
class FocalStack:
    layout: PlaneLayout
    planes: List[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        self.planes = [np.asarray(p, dtype=np.float64) for p in self.planes]
        if len(self.planes) != self.layout.count:
            raise DimensionMismatchError(
                f"stack has {len(self.planes)} planes but the layout has {self.layout.count}")
        shapes = {p.shape for p in self.planes}
        if len(shapes) > 1:
            raise DimensionMismatchError(f"stack planes differ in shape: {sorted(shapes)}")
        if any(np.any(p < 0) for p in self.planes):
            raise ValueError("focal-stack radiance must be non-negative")

    @property
    def shape(self):
        return self.planes[0].shape

    @property
    def channels(self) -> int:
        return 1 if self.planes[0].ndim == 2 else self.planes[0].shape[2]

    def total(self) -> np.ndarray:
        out = np.zeros(self.shape)
        for plane in self.planes:
            out += plane
        return out

    def energy(self) -> float:
        return float(sum(p.sum() for p in self.planes))

    def as_array(self) -> np.ndarray:
        return np.stack(self.planes)

    @classmethod
    def from_array(cls, layout: PlaneLayout, array: np.ndarray) -> "FocalStack":
        return cls(layout, [array[i] for i in range(array.shape[0])])
