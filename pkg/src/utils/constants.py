from enum import Enum

# CSV headers are part of the stable file interface
TRACE_COLUMNS = ['t_s', 'dac_level', 'power_diopter', 'r', 'adc_code', 'event', 'saturated']

ORACLE_COLUMNS = ['pupil_m', 'mismatch_diopter', 'plane_diopter', 'closed_form_w',
                  'image_half_max_w', 'spectral_half_max_w', 'relative_error']

SPOT_COLUMNS = ['focus_diopter', 'spot_index', 'plane_diopter', 'diameter_px', 'confidence']

MTF_COLUMNS = ['freq', 'modulation']

RENDER_INDEX_COLUMNS = ['focus_diopter', 'filename']

OBJECTIVE_COLUMNS = ['iteration', 'objective']

DEPTH_MAGIC = b"DFDM"
DEPTH_HEADER_BYTES = 16
PLANE_MAGIC = b"DFSP"
PLANE_HEADER_BYTES = 16

STACK_MANIFEST = "manifest.yaml"
RUN_MANIFEST = "run_manifest.yaml"
TARGETS_MANIFEST = "targets.yaml"


class FilterMethod(Enum):
    DIRECT = "direct"
    LINEAR = "linear"
    OPT = "opt"

    @staticmethod
    def from_string(value: str) -> "FilterMethod":
        try:
            return FilterMethod(value)
        except ValueError:
            raise ValueError(f"Invalid filter method: {value}")

    def class_path(self) -> str:
        return {
            FilterMethod.DIRECT: "src.filters.DirectFilter",
            FilterMethod.LINEAR: "src.filters.LinearFilter",
            FilterMethod.OPT: "src.filters.OptimizedFilter",
        }[self]


class DisplayMode(Enum):
    HOLD = "hold"
    CONTINUE = "continue"


class Integration(Enum):
    EXACT = "exact"
    EULER = "euler"


class Subcommand(Enum):
    PLAN = "plan"
    FILTER = "filter"
    RENDER = "render"
    SIMULATE = "simulate"
    ANALYZE = "analyze"
    ORACLE = "oracle"

    @staticmethod
    def from_string(value: str) -> "Subcommand":
        try:
            return _STRING_TO_SUBCOMMAND[value]
        except KeyError:
            raise ValueError(f"Invalid subcommand: {value}")


_STRING_TO_SUBCOMMAND = {s.value: s for s in Subcommand}
