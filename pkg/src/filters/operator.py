import math
from typing import Dict, Sequence, Tuple

import numpy as np
from scipy import fft

from src.optics import DisplayModel, EyeModel, PlaneLayout
from src.renderer.kernels import blur_diameter_px, disc_kernel
from src.utils.exceptions import DegenerateBlurError


class StackBlurOperator:
    """
    Linear map from a single-channel focal stack (P x H x W) to the retinal images seen at F eye
    focuses (F x H x W). Each plane/focus pair is a mirror-padded disc convolution, evaluated as a
    product of cached spectra. With a symmetric kernel and mirror padding every block is self-adjoint,
    so the adjoint reuses the same spectra.
    """

    def __init__(self, shape: Tuple[int, int], layout: PlaneLayout, focus_samples: Sequence[float],
                 eye: EyeModel, display: DisplayModel):
        self.shape = tuple(shape)
        self.layout = layout
        self.focus_samples = list(focus_samples)
        diameters = np.array([[blur_diameter_px(eye.focused_at(f), d, display) for d in layout.depths_diopter]
                              for f in self.focus_samples])
        limit = min(self.shape)
        if diameters.max() > limit:
            raise DegenerateBlurError(
                f"blur diameter {diameters.max():.1f} px exceeds the {self.shape[0]}x{self.shape[1]} image")
        self.pad = int(math.ceil(diameters.max() / 2.0))
        padded = (self.shape[0] + 2 * self.pad, self.shape[1] + 2 * self.pad)
        self.fft_shape = (fft.next_fast_len(padded[0], real=True), fft.next_fast_len(padded[1], real=True))

        cache: Dict[float, np.ndarray] = {}
        spectra = np.empty((len(self.focus_samples), layout.count, self.fft_shape[0], self.fft_shape[1] // 2 + 1),
                           dtype=np.complex128)
        for f in range(diameters.shape[0]):
            for p in range(diameters.shape[1]):
                d = float(diameters[f, p])
                if d not in cache:
                    cache[d] = self._kernel_spectrum(d)
                spectra[f, p] = cache[d]
        self.spectra = spectra

    def _kernel_spectrum(self, diameter_px: float) -> np.ndarray:
        kernel = disc_kernel(diameter_px)
        half = kernel.shape[0] // 2
        placed = np.zeros(self.fft_shape)
        placed[:kernel.shape[0], :kernel.shape[1]] = kernel
        placed = np.roll(placed, (-half, -half), axis=(0, 1))
        return fft.rfft2(placed)

    def _to_spectrum(self, images: np.ndarray) -> np.ndarray:
        p = self.pad
        padded = np.pad(images, ((0, 0), (p, p), (p, p)), mode="symmetric")
        return fft.rfft2(padded, s=self.fft_shape, axes=(-2, -1))

    def _from_spectrum(self, spectra: np.ndarray) -> np.ndarray:
        full = fft.irfft2(spectra, s=self.fft_shape, axes=(-2, -1))
        p = self.pad
        return full[:, p:p + self.shape[0], p:p + self.shape[1]]

    def forward(self, stack: np.ndarray) -> np.ndarray:
        return self._from_spectrum(np.einsum("fpij,pij->fij", self.spectra, self._to_spectrum(stack)))

    def adjoint(self, residual: np.ndarray) -> np.ndarray:
        return self._from_spectrum(np.einsum("fpij,fij->pij", self.spectra, self._to_spectrum(residual)))

    def normal(self, stack: np.ndarray) -> np.ndarray:
        return self.adjoint(self.forward(stack))
