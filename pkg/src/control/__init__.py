from .models import PsdGeometry, CalibrationResult, ControllerConfig
from .converters import AdcQuantizer, DacConverter
from .psd import PsdReading, psd_read, geometry_calibration, distinguishable_configs
from .plant import LensPlant
from .calibration import calibrate, plane_targets
from .controller import run_controller
from .trace_metrics import TraceMetrics, trace_metrics, sweep_boundaries, period_sequences
from .scenarios import SCENARIOS, scenario_settings
from .simulator import TrackingSimulator

__all__ = [
    'PsdGeometry',
    'CalibrationResult',
    'ControllerConfig',
    'AdcQuantizer',
    'DacConverter',
    'PsdReading',
    'psd_read',
    'geometry_calibration',
    'distinguishable_configs',
    'LensPlant',
    'calibrate',
    'plane_targets',
    'run_controller',
    'TraceMetrics',
    'trace_metrics',
    'sweep_boundaries',
    'period_sequences',
    'SCENARIOS',
    'scenario_settings',
    'TrackingSimulator',
]
