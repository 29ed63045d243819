"""
Flatland light fields sampled on a regular (x, u) grid and first-order optics acting on them.

x is the ray intercept in meters, u the tangent of the ray angle. Grids are cell centred: a grid of
n samples over an extent E has spacing E/n and its cells tile [center - E/2, center + E/2].
"""
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np
from scipy import ndimage

from src.utils.exceptions import ExtentOverflowError, ResolutionError

OVERFLOW_TOLERANCE = 0.01
COVERAGE_EPS = 1e-9


@dataclass(frozen=True)
class LightFieldGrid:
    n_x: int
    n_u: int
    x_extent_m: float
    u_extent: float
    x_center_m: float = 0.0
    u_center: float = 0.0

    def __post_init__(self):
        if self.n_x < 2 or self.n_u < 2:
            raise ResolutionError(f"light-field grids need at least 2 samples per axis, got {self.n_x}x{self.n_u}")
        if self.x_extent_m <= 0 or self.u_extent <= 0:
            raise ResolutionError("light-field grid extents must be positive")

    @property
    def dx(self) -> float:
        return self.x_extent_m / self.n_x

    @property
    def du(self) -> float:
        return self.u_extent / self.n_u

    @property
    def x_coords(self) -> np.ndarray:
        return self.x_center_m + (np.arange(self.n_x) - (self.n_x - 1) / 2.0) * self.dx

    @property
    def u_coords(self) -> np.ndarray:
        return self.u_center + (np.arange(self.n_u) - (self.n_u - 1) / 2.0) * self.du

    def mesh(self):
        return np.meshgrid(self.x_coords, self.u_coords, indexing="ij")


@dataclass
class SampledLightField:
    """Radiance over (x, u); radiance[i, j] is the sample at x_coords[i], u_coords[j]."""
    radiance: np.ndarray
    grid: LightFieldGrid

    def __post_init__(self):
        self.radiance = np.asarray(self.radiance, dtype=np.float64)
        if self.radiance.shape != (self.grid.n_x, self.grid.n_u):
            raise ResolutionError(
                f"radiance shape {self.radiance.shape} does not match grid {(self.grid.n_x, self.grid.n_u)}")
        if np.any(self.radiance < 0):
            raise ValueError("radiance must be non-negative")

    @property
    def energy(self) -> float:
        return float(self.radiance.sum() * self.grid.dx * self.grid.du)

    def copy(self) -> "SampledLightField":
        return SampledLightField(self.radiance.copy(), self.grid)


@dataclass
class FlatImage:
    """1D image formed by integrating a light field over angle."""
    values: np.ndarray
    x_coords: np.ndarray
    dx: float

    @property
    def energy(self) -> float:
        return float(self.values.sum() * self.dx)


@dataclass(frozen=True)
class RayMatrix:
    """
    2x2 first-order optics matrix acting on [x, u].
    """
    a: float
    b: float
    c: float
    d: float

    @classmethod
    def propagation(cls, distance_m: float) -> "RayMatrix":
        return cls(1.0, float(distance_m), 0.0, 1.0)

    @classmethod
    def refraction(cls, power_diopter: float) -> "RayMatrix":
        return cls(1.0, 0.0, -float(power_diopter), 1.0)

    @classmethod
    def thin_lens(cls, focal_length_m: float) -> "RayMatrix":
        power = 0.0 if np.isinf(focal_length_m) else 1.0 / focal_length_m
        return cls.refraction(power)

    @classmethod
    def identity(cls) -> "RayMatrix":
        return cls(1.0, 0.0, 0.0, 1.0)

    @property
    def determinant(self) -> float:
        return self.a * self.d - self.b * self.c

    def is_identity(self) -> bool:
        return self.a == 1.0 and self.b == 0.0 and self.c == 0.0 and self.d == 1.0

    def inverse(self) -> "RayMatrix":
        det = self.determinant
        return RayMatrix(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def __matmul__(self, other: "RayMatrix") -> "RayMatrix":
        # (self @ other) applies other first
        return RayMatrix(self.a * other.a + self.b * other.c,
                         self.a * other.b + self.b * other.d,
                         self.c * other.a + self.d * other.c,
                         self.c * other.b + self.d * other.d)


@dataclass(frozen=True)
class Aperture:
    """Opening of the given diameter centred on the axis, acting on x."""
    diameter_m: float


Step = Union[RayMatrix, Aperture]


def rect_coverage(centers: np.ndarray, cell_width: Union[float, np.ndarray], width: float,
                  center: float = 0.0) -> np.ndarray:
    """Fraction of each cell [c - w/2, c + w/2] lying inside [center - width/2, center + width/2]."""
    lo = np.maximum(centers - cell_width / 2.0, center - width / 2.0)
    hi = np.minimum(centers + cell_width / 2.0, center + width / 2.0)
    frac = np.clip((hi - lo) / cell_width, 0.0, 1.0)
    frac[frac < COVERAGE_EPS] = 0.0
    frac[frac > 1.0 - COVERAGE_EPS] = 1.0
    return frac


def sample_bilinear(lf: SampledLightField, xs: np.ndarray, us: np.ndarray) -> np.ndarray:
    """Bilinear samples of lf at arbitrary (x, u); zero outside the grid."""
    g = lf.grid
    fi = (xs - g.x_coords[0]) / g.dx
    fj = (us - g.u_coords[0]) / g.du
    values = ndimage.map_coordinates(lf.radiance, [fi, fj], order=1, mode="grid-constant", cval=0.0)
    return np.maximum(values, 0.0)


@dataclass
class LightFieldChain:
    """
    Sequence of ray matrices and apertures, rendered in one pull-back resampling so that
    intermediate planes never need their own grid.
    """
    steps: List[Step] = field(default_factory=list)

    def then(self, step: Step) -> "LightFieldChain":
        return LightFieldChain(self.steps + [step])

    def total_matrix(self) -> RayMatrix:
        total = RayMatrix.identity()
        for step in self.steps:
            if isinstance(step, RayMatrix):
                total = step @ total
        return total

    def render(self, lf: SampledLightField, grid: Optional[LightFieldGrid] = None) -> SampledLightField:
        grid = grid or lf.grid
        xs, us = grid.mesh()
        weight = np.ones_like(xs)
        # jacobian of output coordinates -> current plane coordinates
        jac = RayMatrix.identity()
        for step in reversed(self.steps):
            if isinstance(step, RayMatrix):
                inv = step.inverse()
                xs, us = inv.a * xs + inv.b * us, inv.c * xs + inv.d * us
                jac = inv @ jac
            else:
                # soft edge: footprint of one output cell in this plane's x
                footprint = abs(jac.a) * grid.dx + abs(jac.b) * grid.du
                weight *= rect_coverage(xs, footprint, step.diameter_m)
        values = sample_bilinear(lf, xs, us) * weight
        return SampledLightField(values, grid)


def build_pixel_lightfield(pixel_pitch_m: float, grid: LightFieldGrid, amplitude: Optional[float] = None,
                           min_samples_per_pixel: float = 8.0) -> SampledLightField:
    """
    Light field of one pixel emitting isotropically: rect of width pixel_pitch_m in x, constant in u.
    The default amplitude 1/pixel_pitch_m gives unit radiance per unit angle.
    """
    if pixel_pitch_m / grid.dx < min_samples_per_pixel - 1e-9:
        raise ResolutionError(
            f"x spacing {grid.dx:.3e} m resolves the {pixel_pitch_m:.3e} m pixel with only "
            f"{pixel_pitch_m / grid.dx:.2f} samples (need {min_samples_per_pixel})")
    if amplitude is None:
        amplitude = 1.0 / pixel_pitch_m
    profile = amplitude * rect_coverage(grid.x_coords, grid.dx, pixel_pitch_m)
    radiance = np.repeat(profile[:, None], grid.n_u, axis=1)
    return SampledLightField(radiance, grid)


def transport(lf: SampledLightField, m: RayMatrix, grid: Optional[LightFieldGrid] = None) -> SampledLightField:
    """
    l_o(x) = l_i(m^-1 x), resampled bilinearly onto grid (the input grid by default).
    """
    grid = grid or lf.grid
    if m.is_identity() and grid == lf.grid:
        return lf.copy()
    out = LightFieldChain([m]).render(lf, grid)
    energy_in = lf.energy
    if energy_in > 0 and out.energy < (1.0 - OVERFLOW_TOLERANCE) * energy_in:
        raise ExtentOverflowError(
            f"transport left {100 * (1 - out.energy / energy_in):.2f}% of the energy outside the grid")
    return out


def apply_aperture(lf: SampledLightField, aperture_diameter_m: float) -> SampledLightField:
    """Multiply by rect(x/a), weighting partially covered cells by their covered fraction."""
    if aperture_diameter_m <= 0:
        raise ValueError(f"aperture diameter must be > 0, got {aperture_diameter_m}")
    mask = rect_coverage(lf.grid.x_coords, lf.grid.dx, aperture_diameter_m)
    return SampledLightField(lf.radiance * mask[:, None], lf.grid)


def integrate_to_image(lf: SampledLightField) -> FlatImage:
    return FlatImage(values=lf.radiance.sum(axis=1) * lf.grid.du,
                     x_coords=lf.grid.x_coords,
                     dx=lf.grid.dx)
