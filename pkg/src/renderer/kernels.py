import math

import numpy as np
from scipy.signal import fftconvolve

from src.optics import DisplayModel, EyeModel
from src.utils.exceptions import DegenerateBlurError

SUPERSAMPLE = 4
IDENTITY_DIAMETER_PX = 1e-9


def blur_diameter_px(eye: EyeModel, plane_diopter: float, display: DisplayModel, oversample: int = 1) -> float:
    """Defocus disc diameter a * d_o * |focus - plane| / dx, in display pixels (or sub-pixels)."""
    mismatch = abs(eye.focus_diopter - plane_diopter)
    return eye.pupil_diameter_m * display.display_distance_m * mismatch / display.pixel_pitch_m * oversample


def disc_kernel(diameter_px: float, supersample: int = SUPERSAMPLE) -> np.ndarray:
    """
    Area-normalized uniform disc with antialiased edges.
    Each pixel weight is the covered fraction of supersample x supersample sub-samples.
    """
    if diameter_px <= IDENTITY_DIAMETER_PX:
        return np.ones((1, 1))
    radius = diameter_px / 2.0
    half = int(math.ceil(radius))
    offsets = (np.arange(supersample) + 0.5) / supersample - 0.5
    centers = np.arange(-half, half + 1)
    sub = (centers[:, None] + offsets[None, :]).ravel()
    inside = (sub[:, None] ** 2 + sub[None, :] ** 2) <= radius ** 2
    size = 2 * half + 1
    kernel = inside.reshape(size, supersample, size, supersample).mean(axis=(1, 3))
    if kernel.sum() == 0:
        kernel[half, half] = 1.0
    return kernel / kernel.sum()


def disc_blur(image: np.ndarray, diameter_px: float) -> np.ndarray:
    """
    Convolve image (HxW or HxWxC) with a disc kernel. Borders are mirror-padded by the kernel radius and
    cropped back, so a symmetric kernel keeps the total radiance and a uniform image stays uniform.
    """
    image = np.asarray(image, dtype=np.float64)
    if diameter_px > min(image.shape[0], image.shape[1]):
        raise DegenerateBlurError(
            f"blur diameter {diameter_px:.1f} px exceeds the {image.shape[0]}x{image.shape[1]} image")
    kernel = disc_kernel(diameter_px)
    if kernel.shape == (1, 1):
        return image.copy()
    if image.ndim == 3:
        return np.stack([disc_blur(image[:, :, c], diameter_px) for c in range(image.shape[2])], axis=2)
    half = kernel.shape[0] // 2
    padded = np.pad(image, half, mode="symmetric")
    return fftconvolve(padded, kernel, mode="valid")
