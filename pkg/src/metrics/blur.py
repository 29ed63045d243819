from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.utils.exceptions import NoSpotError
from src.utils.util_func import half_max_span

SPOT_EPS = 1e-12


@dataclass
class BlurEstimate:
    diameter_px: float
    low_confidence: bool

    @property
    def confidence(self) -> str:
        return "low" if self.low_confidence else "ok"


def _window(image: np.ndarray, center: Tuple[int, int], half: Optional[int]):
    if half is None:
        return image, center
    r, c = center
    top, left = max(r - half, 0), max(c - half, 0)
    patch = image[top:min(r + half + 1, image.shape[0]), left:min(c + half + 1, image.shape[1])]
    return patch, (r - top, c - left)


def _axis_width(profile: np.ndarray, start: int, threshold: float) -> float:
    if profile[start] < threshold:
        start = int(np.argmax(profile))
    span = half_max_span(profile, start, threshold)
    if span is None:
        raise NoSpotError("spot reaches the edge of the measurement window")
    return span[1] - span[0]


def estimate_blur_diameter(image: np.ndarray, spot_center: Tuple[int, int], window: Optional[int] = None,
                           reliability_floor_px: float = 3.0) -> BlurEstimate:
    """
    Width of the region above half the spot's peak, measured along the row and the column through
    spot_center and averaged. The background is the median of the window border.
    window is the half-size of the square neighbourhood used; None means the whole image.
    """
    patch, (r, c) = _window(np.asarray(image, dtype=np.float64), spot_center, window)
    if patch.ndim == 3:
        patch = patch.mean(axis=2)
    border = np.concatenate([patch[0, :], patch[-1, :], patch[:, 0], patch[:, -1]])
    signal = patch - np.median(border)
    peak = float(signal.max())
    if peak <= SPOT_EPS * max(1.0, float(np.abs(patch).max())):
        raise NoSpotError(f"no spot above the background around {spot_center}")
    threshold = 0.5 * peak
    row_width = _axis_width(signal[r, :], c, threshold)
    col_width = _axis_width(signal[:, c], r, threshold)
    diameter = 0.5 * (row_width + col_width)
    return BlurEstimate(diameter_px=diameter, low_confidence=diameter < reliability_floor_px)
