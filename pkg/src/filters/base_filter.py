from src.optics import PlaneLayout
from src.renderer import FocalStack, Scene


class BaseFilter:
    """Decomposes a scene into a focal stack on the given layout."""

    def __call__(self, scene: Scene, layout: PlaneLayout) -> FocalStack:
        raise NotImplementedError("Subclasses must implement __call__")
