import numpy as np
import pytest

from src.lightfield import (LightFieldGrid, SampledLightField, RayMatrix, Aperture, LightFieldChain,
                            build_pixel_lightfield, transport, apply_aperture, integrate_to_image,
                            oracle_retinal_psf, oracle_sweep)
from src.optics import DisplayModel, EyeModel, lens_power_for_depth, plane_bandwidth
from src.utils.constants import ORACLE_COLUMNS
from src.utils.exceptions import ResolutionError, ExtentOverflowError
from src.utils.settings import OracleSettings

display = DisplayModel(pixel_pitch_m=13.6e-6, display_distance_m=0.07)


def gaussian_field(grid: LightFieldGrid, sigma_x: float, sigma_u: float) -> SampledLightField:
    xs, us = grid.mesh()
    return SampledLightField(np.exp(-0.5 * (xs / sigma_x) ** 2 - 0.5 * (us / sigma_u) ** 2), grid)


def test_pixel_lightfield_columns_and_energy():
    grid = LightFieldGrid(n_x=64, n_u=16, x_extent_m=64.0, u_extent=2.0)
    lf = build_pixel_lightfield(4.0, grid, amplitude=1.0, min_samples_per_pixel=4)
    nonzero_columns = np.nonzero(lf.radiance.sum(axis=1))[0]
    assert len(nonzero_columns) == 4
    assert np.allclose(lf.radiance[nonzero_columns], 1.0)
    assert lf.energy == pytest.approx(4.0 * 2.0)


def test_pixel_lightfield_spectrum_is_sinc():
    pitch = 13.6e-6
    grid = LightFieldGrid(n_x=512, n_u=4, x_extent_m=64 * pitch, u_extent=0.1)
    lf = build_pixel_lightfield(pitch, grid)
    spectrum = np.abs(np.fft.rfft(lf.radiance[:, 0]))
    spectrum /= spectrum[0]
    freqs = np.fft.rfftfreq(grid.n_x, d=grid.dx)
    band = freqs <= 1 / (2 * pitch)
    assert np.max(np.abs(spectrum[band] - np.abs(np.sinc(pitch * freqs[band])))) < 0.02


def test_pixel_lightfield_rejects_coarse_grid():
    grid = LightFieldGrid(n_x=64, n_u=16, x_extent_m=64.0, u_extent=2.0)
    with pytest.raises(ResolutionError):
        build_pixel_lightfield(4.0, grid)


def test_identity_transport_is_bitwise_copy():
    grid = LightFieldGrid(n_x=32, n_u=32, x_extent_m=1.0, u_extent=1.0)
    lf = gaussian_field(grid, 0.1, 0.1)
    out = transport(lf, RayMatrix.identity())
    assert np.array_equal(out.radiance, lf.radiance)
    assert out.radiance is not lf.radiance


def test_ray_matrices_are_unimodular_and_compose():
    m = RayMatrix.propagation(0.07) @ RayMatrix.refraction(12.0) @ RayMatrix.propagation(0.017)
    assert m.determinant == pytest.approx(1.0)
    assert (m @ m.inverse()).as_array() == pytest.approx(np.eye(2))
    assert RayMatrix.thin_lens(np.inf).is_identity()


def test_transport_composition():
    grid = LightFieldGrid(n_x=256, n_u=256, x_extent_m=2.0, u_extent=2.0)
    lf = gaussian_field(grid, 0.1, 0.1)
    a = RayMatrix.propagation(0.5)
    b = RayMatrix.refraction(1.5)
    stepwise = transport(transport(lf, a), b)
    composed = transport(lf, b @ a)
    assert np.max(np.abs(stepwise.radiance - composed.radiance)) < 0.02
    assert stepwise.energy == pytest.approx(composed.energy, rel=1e-3)


def test_propagation_round_trip():
    grid = LightFieldGrid(n_x=512, n_u=128, x_extent_m=2.0, u_extent=2.0)
    lf = gaussian_field(grid, 0.1, 0.2)
    back = transport(transport(lf, RayMatrix.propagation(0.1)), RayMatrix.propagation(-0.1))
    rel = np.linalg.norm(back.radiance - lf.radiance) / np.linalg.norm(lf.radiance)
    assert rel <= 1e-3
    assert np.all(back.radiance >= 0)


def test_full_aperture_is_identity():
    grid = LightFieldGrid(n_x=32, n_u=8, x_extent_m=1.0, u_extent=1.0)
    lf = gaussian_field(grid, 0.2, 0.2)
    assert np.array_equal(apply_aperture(lf, 1.0).radiance, lf.radiance)
    narrow = apply_aperture(lf, grid.dx / 2)
    narrower = apply_aperture(lf, grid.dx / 4)
    assert narrow.energy == pytest.approx(2 * narrower.energy)


def test_transport_overflow():
    grid = LightFieldGrid(n_x=64, n_u=64, x_extent_m=1.0, u_extent=1.0)
    lf = gaussian_field(grid, 0.1, 0.2)
    with pytest.raises(ExtentOverflowError):
        transport(lf, RayMatrix.propagation(5.0))


def test_aperture_in_chain_matches_stepwise():
    grid = LightFieldGrid(n_x=256, n_u=128, x_extent_m=2.0, u_extent=2.0)
    lf = gaussian_field(grid, 0.2, 0.3)
    stepwise = transport(apply_aperture(lf, 0.5), RayMatrix.propagation(0.2))
    chained = LightFieldChain([Aperture(0.5), RayMatrix.propagation(0.2)]).render(lf)
    assert stepwise.energy == pytest.approx(chained.energy, rel=0.02)


def test_integrate_conserves_energy_and_fourier_slice():
    grid = LightFieldGrid(n_x=64, n_u=32, x_extent_m=1.0, u_extent=1.0)
    lf = gaussian_field(grid, 0.1, 0.2)
    image = integrate_to_image(lf)
    assert image.energy == pytest.approx(lf.energy, rel=1e-12)
    slice_ = np.fft.fft2(lf.radiance)[:, 0] * grid.du
    assert np.allclose(np.fft.fft(image.values), slice_, rtol=1e-10, atol=1e-12)


def test_oracle_in_focus_matches_display_bound():
    eye = EyeModel(pupil_diameter_m=0.004, focus_diopter=2.0)
    oracle = OracleSettings(n_x=1024, n_u=256)
    result = oracle_retinal_psf(display, eye, lens_power_for_depth(display, 2.0), oracle)
    closed = plane_bandwidth(display, eye, result.plane_diopter)
    assert result.image_half_max_w == pytest.approx(closed, rel=0.02)
    assert result.spectral_half_max_w > 0
    magnified_pixel = 13.6e-6 * 0.017 / 0.07
    assert abs(result.half_max_width_m - magnified_pixel) <= result.image.dx


def test_oracle_defocused_matches_blur_branch():
    eye = EyeModel(pupil_diameter_m=0.004, focus_diopter=1.0 + 1.0)
    oracle = OracleSettings(n_x=1024, n_u=256)
    result = oracle_retinal_psf(display, eye, lens_power_for_depth(display, 1.0), oracle)
    assert result.image_half_max_w == pytest.approx(1 / (2 * 0.004 * 0.017 * 1.0), rel=0.02)


@pytest.mark.slow
def test_oracle_sweep_agrees_with_closed_form():
    frame = oracle_sweep(display, EyeModel(pupil_diameter_m=0.004))
    assert len(frame) == 125
    assert frame["relative_error"].max() <= 0.02


def test_oracle_sweep_names_both_bandwidths():
    oracle = OracleSettings(n_x=1024, n_u=256, pupils_m=[0.004], mismatches_diopter=[0.0, 1.0],
                            plane_depths_diopter=[1.0])
    frame = oracle_sweep(display, EyeModel(pupil_diameter_m=0.004), oracle)
    assert list(frame.columns) == ORACLE_COLUMNS
    assert "image_half_max_w" in frame.columns and "spectral_half_max_w" in frame.columns
    closed = frame["closed_form_w"]
    assert np.allclose(frame["relative_error"], (frame["image_half_max_w"] - closed).abs() / closed)
    assert frame["relative_error"].max() <= 0.02
    assert (frame["spectral_half_max_w"] > 0).all()
