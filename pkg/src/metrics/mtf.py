from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from src.utils.constants import MTF_COLUMNS
from src.utils.exceptions import NoLineError

NYQUIST = 0.5
BACKGROUND_FRACTION = 0.1


@dataclass
class MtfCurve:
    """Modulation against spatial frequency in cycles per display pixel, normalized to 1 at DC."""
    freqs: np.ndarray
    modulation: np.ndarray

    @property
    def mtf50(self) -> float:
        """First frequency where the modulation falls to 0.5; Nyquist if it never does below Nyquist."""
        below = np.nonzero(self.modulation < 0.5)[0]
        if below.size == 0 or self.freqs[below[0]] > NYQUIST:
            return NYQUIST
        k = below[0]
        m0, m1 = self.modulation[k - 1], self.modulation[k]
        f0, f1 = self.freqs[k - 1], self.freqs[k]
        return float(min(f0 + (m0 - 0.5) / (m0 - m1) * (f1 - f0), NYQUIST))

    @property
    def first_zero(self) -> Optional[float]:
        m = self.modulation
        minima = np.nonzero((m[1:-1] <= m[:-2]) & (m[1:-1] < m[2:]))[0]
        return float(self.freqs[minima[0] + 1]) if minima.size else None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({MTF_COLUMNS[0]: self.freqs, MTF_COLUMNS[1]: self.modulation})


def line_spread(image: np.ndarray, axis: int) -> np.ndarray:
    """Average along the line direction and remove the background seen at both ends of the profile."""
    image = np.asarray(image, dtype=np.float64)
    if image.ndim == 3:
        image = image.mean(axis=2)
    lsf = image.mean(axis=axis)
    edge = max(1, int(len(lsf) * BACKGROUND_FRACTION))
    background = np.median(np.concatenate([lsf[:edge], lsf[-edge:]]))
    lsf = lsf - background
    if lsf.max() <= 1e-12 * max(1.0, float(np.abs(image).max())):
        raise NoLineError("no line above the background")
    return lsf


def mtf_from_slit(image: np.ndarray, axis: int = 0, pad: int = 4096, samples_per_pixel: int = 1) -> MtfCurve:
    """
    MTF of a line target; axis is the image axis the line runs along.
    samples_per_pixel converts frequencies of an oversampled render back to display pixels.
    """
    lsf = line_spread(image, axis)
    n = max(pad, len(lsf))
    spectrum = np.abs(np.fft.rfft(lsf, n=n))
    spectrum = np.clip(spectrum / spectrum[0], 0.0, 1.0)
    freqs = np.fft.rfftfreq(n) * samples_per_pixel
    return MtfCurve(freqs=freqs, modulation=spectrum)
