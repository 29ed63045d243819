import re
from dataclasses import dataclass, field
from typing import List

import numpy as np
import pandas as pd

from src.optics import PlaneLayout
from src.utils.exceptions import EmptyTraceError
from .models import CalibrationResult

_MISSED = re.compile(r"missed\((\d+)\)")


@dataclass
class TraceMetrics:
    planes_per_second: float
    frames_per_second: float
    per_plane_depth_error_diopter: np.ndarray
    missed_planes: List[int] = field(default_factory=list)
    sweeps: List[List[int]] = field(default_factory=list)
    elapsed_s: float = 0.0

    @property
    def worst_depth_error_diopter(self) -> float:
        return float(np.nanmax(self.per_plane_depth_error_diopter))


def sweep_boundaries(trace: pd.DataFrame) -> np.ndarray:
    """Row labels where the ramp turns upward, which close one up-down period and open the next."""
    turns = trace[trace["direction_flip"] & (trace["direction"] > 0)]
    return turns.index.to_numpy()


def period_sequences(trace: pd.DataFrame) -> List[List[int]]:
    """Displayed plane indices of each complete period, in display order."""
    bounds = sweep_boundaries(trace)
    plane = trace["plane_index"]
    sequences = []
    for start, stop in zip(bounds[:-1], bounds[1:]):
        chunk = plane.loc[start:stop].iloc[1:]
        sequences.append(chunk[chunk > 0].astype(int).tolist())
    return sequences


def trace_metrics(trace: pd.DataFrame, calib: CalibrationResult, layout: PlaneLayout,
                  bitplanes_per_trigger: int = 8, bit_depth: int = 8) -> TraceMetrics:
    """
    Throughput and depth accuracy of a controller trace.

    Throughput counts displayed planes over the complete up-down periods in the trace; a trigger that
    shows fewer bitplanes than bit_depth counts as that fraction of a plane. Each sweep direction is one
    frame of the layout. The depth error of a plane is the worst |alpha + beta * r - target| over its
    triggers, with r taken from the true lens power and not from the detector reading.
    """
    if trace is None or trace.empty:
        raise EmptyTraceError("trace holds no samples")
    bounds = sweep_boundaries(trace)
    if len(bounds) < 2:
        raise EmptyTraceError("trace holds no complete up-down period")

    t = trace["t_s"]
    elapsed = float(t.loc[bounds[-1]] - t.loc[bounds[0]])
    sequences = period_sequences(trace)
    displayed = sum(len(s) for s in sequences)
    planes_per_second = displayed * bitplanes_per_trigger / bit_depth / elapsed
    frames_per_second = 2 * (len(bounds) - 1) / elapsed

    triggers = trace[trace["plane_index"] > 0]
    depth = calib.diopter_of(triggers["r_true"].to_numpy())
    target = layout.as_array()[triggers["plane_index"].to_numpy() - 1]
    errors = pd.Series(np.abs(depth - target)).groupby(triggers["plane_index"].to_numpy()).max()
    per_plane = np.full(layout.count, np.nan)
    per_plane[errors.index.to_numpy() - 1] = errors.to_numpy()

    missed = [int(m) for event in trace["event"] for m in _MISSED.findall(event)]
    return TraceMetrics(planes_per_second=planes_per_second, frames_per_second=frames_per_second,
                        per_plane_depth_error_diopter=per_plane, missed_planes=missed, sweeps=sequences,
                        elapsed_s=elapsed)
