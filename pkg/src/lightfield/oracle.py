"""
Retinal point-spread of a single display pixel computed by transporting its light field through
tunable lens, pupil and eye. Used to check the closed-form bandwidth of optics.analytics.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from src.optics import DisplayModel, EyeModel, plane_bandwidth, lens_power_for_depth, virtual_image_diopter
from src.utils.constants import ORACLE_COLUMNS
from src.utils.exceptions import ResolutionError
from src.utils.settings import OracleSettings
from src.utils.util_func import half_max_span
from .lightfield import (Aperture, FlatImage, LightFieldChain, LightFieldGrid, RayMatrix, build_pixel_lightfield,
                         integrate_to_image)

logger = logging.getLogger(__name__)

SPECTRAL_PAD_FACTOR = 8
MIN_RETINA_SAMPLES_PER_PIXEL = 8.0


@dataclass
class OracleResult:
    image: FlatImage
    plane_diopter: float
    half_max_width_m: float
    image_half_max_w: float
    spectral_half_max_w: float


def display_grid(display: DisplayModel, eye: EyeModel, oracle: OracleSettings) -> LightFieldGrid:
    u_extent = oracle.u_margin * eye.pupil_diameter_m / display.display_distance_m
    return LightFieldGrid(n_x=oracle.n_x, n_u=oracle.n_u,
                          x_extent_m=oracle.pixel_extent * display.pixel_pitch_m,
                          u_extent=u_extent)


def retina_grid(display: DisplayModel, eye: EyeModel, plane_diopter: float, oracle: OracleSettings) -> LightFieldGrid:
    d_e = eye.retina_distance_m
    pixel_image = display.pixel_pitch_m * d_e / display.display_distance_m
    blur = eye.pupil_diameter_m * d_e * abs(eye.focus_diopter - plane_diopter)
    extent = 1.5 * (pixel_image + blur) + 8.0 * pixel_image
    if pixel_image / (extent / oracle.n_x) < MIN_RETINA_SAMPLES_PER_PIXEL:
        raise ResolutionError(
            f"retina grid of {oracle.n_x} samples over {extent:.3e} m under-resolves the "
            f"{pixel_image:.3e} m pixel image")
    u_extent = oracle.u_margin * (eye.pupil_diameter_m + extent) / d_e
    return LightFieldGrid(n_x=oracle.n_x, n_u=oracle.n_u, x_extent_m=extent, u_extent=u_extent)


def eye_chain(display: DisplayModel, eye: EyeModel, lens_power_diopter: float) -> LightFieldChain:
    """Panel -> tunable lens -> pupil (at the lens) -> eye lens -> retina."""
    return LightFieldChain([
        RayMatrix.propagation(display.display_distance_m),
        RayMatrix.refraction(lens_power_diopter),
        Aperture(eye.pupil_diameter_m),
        RayMatrix.refraction(eye.eye_lens_power_diopter),
        RayMatrix.propagation(eye.retina_distance_m),
    ])


def half_max_width(image: FlatImage) -> float:
    values = image.values
    peak = int(np.argmax(values))
    span = half_max_span(values, peak, 0.5 * values[peak])
    if span is None:
        raise ResolutionError("retinal image touches the grid edge, cannot measure its width")
    return (span[1] - span[0]) * image.dx


def spectral_half_max(image: FlatImage) -> float:
    """Frequency where the normalized magnitude spectrum first drops to 0.5, cycles per meter."""
    n = len(image.values) * SPECTRAL_PAD_FACTOR
    spectrum = np.abs(np.fft.rfft(image.values, n=n))
    spectrum /= spectrum[0]
    freqs = np.fft.rfftfreq(n, d=image.dx)
    below = np.nonzero(spectrum < 0.5)[0]
    if below.size == 0:
        return float(freqs[-1])
    k = below[0]
    s0, s1 = spectrum[k - 1], spectrum[k]
    return float(freqs[k - 1] + (s0 - 0.5) / (s0 - s1) * (freqs[k] - freqs[k - 1]))


def oracle_retinal_psf(display: DisplayModel, eye: EyeModel, lens_power_diopter: float,
                       oracle: Optional[OracleSettings] = None) -> OracleResult:
    """
    Retinal image of one pixel and two measured bandwidths. image_half_max_w is 1 / (2 * FWHM) of the
    image; the FWHM of a pixel image convolved with a blur disc is the larger of the two widths, so it
    agrees with the closed-form plane bandwidth. spectral_half_max_w is where the image spectrum falls
    to half, reported alongside as a cross-check.
    """
    oracle = oracle or OracleSettings()
    plane = virtual_image_diopter(display, lens_power_diopter)
    source_grid = display_grid(display, eye, oracle)
    source = build_pixel_lightfield(display.pixel_pitch_m, source_grid)
    out = eye_chain(display, eye, lens_power_diopter).render(source, retina_grid(display, eye, plane, oracle))
    image = integrate_to_image(out)
    width = half_max_width(image)
    return OracleResult(image=image,
                        plane_diopter=plane,
                        half_max_width_m=width,
                        image_half_max_w=1.0 / (2.0 * width),
                        spectral_half_max_w=spectral_half_max(image))


def oracle_sweep(display: DisplayModel, eye: EyeModel, oracle: Optional[OracleSettings] = None) -> pd.DataFrame:
    """
    Closed-form vs measured bandwidth over every (pupil, mismatch, plane) combination.
    relative_error compares image_half_max_w with the closed form.
    """
    oracle = oracle or OracleSettings()
    rows = []
    for pupil in oracle.pupils_m:
        for mismatch in oracle.mismatches_diopter:
            for plane in oracle.plane_depths_diopter:
                viewer = EyeModel(pupil_diameter_m=pupil,
                                 retina_distance_m=eye.retina_distance_m,
                                 focus_diopter=plane + mismatch)
                result = oracle_retinal_psf(display, viewer, lens_power_for_depth(display, plane), oracle)
                closed = plane_bandwidth(display, viewer, result.plane_diopter)
                rows.append([pupil, mismatch, plane, closed, result.image_half_max_w, result.spectral_half_max_w,
                             abs(result.image_half_max_w - closed) / closed])
        logger.info("oracle: pupil %.4f m done (%d configurations)", pupil, len(rows))
    return pd.DataFrame(rows, columns=ORACLE_COLUMNS)
