from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.utils.exceptions import DegenerateFitError


@dataclass
class LinearFit:
    slope: float
    intercept: float
    r_squared: float
    residuals: np.ndarray

    def predict(self, xs) -> np.ndarray:
        return self.slope * np.asarray(xs, dtype=np.float64) + self.intercept


def linear_fit(xs: Sequence[float], ys: Sequence[float]) -> LinearFit:
    """
    Ordinary least squares y = slope * x + intercept.
    A constant y has zero residual and zero variance; its R^2 is taken as 1.
    """
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.size < 2:
        raise DegenerateFitError(f"need two equally long samples of at least 2 points, got {x.size} and {y.size}")
    x_mean, y_mean = x.mean(), y.mean()
    sxx = float(np.sum((x - x_mean) ** 2))
    if sxx == 0.0:
        raise DegenerateFitError("all x values are equal")
    slope = float(np.sum((x - x_mean) * (y - y_mean)) / sxx)
    intercept = float(y_mean - slope * x_mean)
    residuals = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y_mean) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum(residuals ** 2)) / ss_tot
    return LinearFit(slope=slope, intercept=intercept, r_squared=r_squared, residuals=residuals)
