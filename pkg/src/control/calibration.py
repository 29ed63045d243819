from typing import List

import numpy as np

from src.utils.exceptions import DegenerateCalibrationError, UsageError
from .models import CalibrationResult


def calibrate(r_a: float, diopter_a: float, r_b: float, diopter_b: float) -> CalibrationResult:
    """
    Two-point calibration of depth against PSD ratio: solves 1/v = alpha + beta * r through
    (r_a, diopter_a) and (r_b, diopter_b).
    """
    if r_a == r_b:
        raise DegenerateCalibrationError(f"both calibration readings are r = {r_a}")
    beta = (diopter_b - diopter_a) / (r_b - r_a)
    if beta == 0.0 or not np.isfinite(beta):
        raise DegenerateCalibrationError(f"calibration slope is {beta} from depths {diopter_a} and {diopter_b}")
    alpha = diopter_a - beta * r_a
    return CalibrationResult(alpha_diopter=alpha, beta_diopter_per_ratio=beta)


def plane_targets(calib: CalibrationResult, near_diopter: float, far_diopter: float, n: int) -> List[float]:
    """PSD ratios r_1..r_n whose calibrated depths run evenly from near_diopter to far_diopter."""
    if n < 2:
        raise UsageError(f"need at least 2 planes to place targets, got {n}")
    r_near = calib.ratio_of(near_diopter)
    r_far = calib.ratio_of(far_diopter)
    return np.linspace(r_near, r_far, n).tolist()
