"""
Sample-by-sample execution of the tunable-lens and focal-plane control loop.

The DAC ramps the lens with a triangle wave. Each sample the PSD ratio, delayed by the tracking
latency and quantized by the ADC, is compared with the pending target r_i; a hit displays plane i and
advances i in the sweep direction. Passing the last (first) plane turns the ramp down (up).
"""
import logging
from collections import deque
from typing import List

import numpy as np
import pandas as pd

from src.utils.constants import DisplayMode, TRACE_COLUMNS
from src.utils.exceptions import UsageError
from .converters import AdcQuantizer
from .models import ControllerConfig, PsdGeometry
from .plant import LensPlant
from .psd import psd_read

logger = logging.getLogger(__name__)

# kept next to the CSV columns for trace_metrics
INTERNAL_COLUMNS = ['r_true', 'plane_index', 'direction', 'direction_flip']


def _turn(direction: int, n: int):
    direction = -direction
    return direction, (n if direction < 0 else 1)


def run_controller(plant: LensPlant, geom: PsdGeometry, cfg: ControllerConfig, duration_s: float,
                   seed: int = 0, noise_enabled: bool = True) -> pd.DataFrame:
    """
    Run the control loop for duration_s and return the trace, one row per sample.

    Per sample: the DAC level L moves by dac_step in the sweep direction, unless the display is busy in
    hold mode. A level pushed past either DAC rail flips the sweep and every pending plane of the
    abandoned sweep is recorded as missed. The PSD sees the lens power left by the previous sample.
    Triggering is blocked for plane_display_time_s after each displayed plane.

    The event column holds ';'-joined plane_displayed(i), direction_flip and missed(i) entries,
    or 'none'. Plane indices are 1-based, plane 1 being targets[0].
    """
    if not np.isclose(plant.dt_s, cfg.sample_period_s, rtol=1e-9, atol=0.0):
        raise UsageError(f"plant sample period {plant.dt_s} s does not match the controller's "
                         f"{cfg.sample_period_s} s")
    n_samples = int(round(duration_s * cfg.sample_rate_hz))
    if n_samples < 1:
        raise UsageError(f"duration {duration_s} s is shorter than one sample")

    rng = np.random.default_rng(seed) if noise_enabled else None
    adc = AdcQuantizer(cfg.adc_bits)
    targets = cfg.targets
    n = cfg.plane_count
    window = cfg.trigger_window
    hold = cfg.display_mode is DisplayMode.HOLD
    dt = cfg.sample_period_s
    max_level = cfg.max_level

    latency_line = deque([geom.ratio(plant.power)] * cfg.latency_samples)
    level_f = float(cfg.initial_dac_level)
    direction, index, busy = 1, 1, 0
    rows: List[list] = []

    for k in range(n_samples):
        events = []
        flipped = False

        if not (hold and busy > 0):
            level_f += direction * cfg.dac_step
            if level_f > max_level or level_f < 0:
                level_f = min(max(level_f, 0.0), float(max_level))
                pending = list(range(index, n + 1)) if direction > 0 else list(range(index, 0, -1))
                logger.warning("DAC rail reached at t=%.6f s with planes %s pending; reversing sweep",
                               k * dt, pending)
                events += [f"missed({i})" for i in pending]
                direction, index = _turn(direction, n)
                events.append("direction_flip")
                flipped = True
        level = int(np.floor(level_f + 0.5))

        power = plant.power
        saturated = plant.saturated
        r_true = geom.ratio(power)
        r_read = psd_read(power, geom, rng=rng).r if rng is not None else r_true
        if cfg.latency_samples:
            latency_line.append(r_read)
            r_seen = latency_line.popleft()
        else:
            r_seen = r_read
        code = adc.code(r_seen)

        triggered = 0
        if busy > 0:
            busy -= 1
        elif abs(adc.ratio(code) - targets[index - 1]) <= window:
            triggered = index
            events.append(f"plane_displayed({index})")
            busy = cfg.display_samples
            index += direction
            if (direction > 0 and index > n) or (direction < 0 and index < 1):
                direction, index = _turn(direction, n)
                events.append("direction_flip")
                flipped = True

        plant.step(level)
        rows.append([k * dt, level, power, r_read, code, ";".join(events) if events else "none", saturated,
                     r_true, triggered, direction, flipped])

    trace = pd.DataFrame(rows, columns=TRACE_COLUMNS + INTERNAL_COLUMNS)
    logger.info("controller ran %d samples, %d planes displayed", n_samples, int((trace["plane_index"] > 0).sum()))
    return trace
