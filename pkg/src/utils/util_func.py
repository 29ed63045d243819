import importlib
from pathlib import Path
from typing import Dict, Any, List, Optional, Tuple

import numpy as np
import pandas as pd
from colorama import Fore, Style
from tabulate import tabulate

from .exceptions import UsageError

CSV_FLOAT_FORMAT = "%.12g"


def import_filter_class(class_path: str):
    """
    Import a class from a dotted path like 'src.filters.LinearFilter'
    """
    module_path, class_name = class_path.rsplit('.', 1)
    module = importlib.import_module(module_path)
    return getattr(module, class_name)


def deep_merge_dicts(a: Dict[str, Any], b: Dict[str, Any]) -> Dict[str, Any]:
    """
     deep merge two dicts
    :param a:
    :param b:
    :return: new Dict
    """
    result = a.copy()
    for key, value in b.items():
        if key in result and isinstance(result[key], Dict) and isinstance(value, Dict):
            result[key] = deep_merge_dicts(result[key], value)
        else:
            result[key] = value
    return result


def parse_focus_spec(spec: str) -> List[float]:
    """
    Parse a focus specification into diopter values.
    Accepts 'sweep:<start>:<stop>:<count>' (inclusive, uniform in diopters) or a comma list '0,0.5,2'.
    """
    spec = spec.strip()
    try:
        if spec.startswith("sweep:"):
            parts = spec.split(":")
            if len(parts) != 4:
                raise UsageError(f"focus sweep must look like sweep:<start>:<stop>:<count>, got '{spec}'")
            start, stop, count = float(parts[1]), float(parts[2]), int(parts[3])
            if count < 1:
                raise UsageError(f"focus sweep count must be >= 1, got {count}")
            values = np.linspace(start, stop, count).tolist()
        else:
            values = [float(v) for v in spec.split(",") if v.strip()]
    except ValueError as e:
        raise UsageError(f"cannot parse focus specification '{spec}': {e}")
    if not values:
        raise UsageError("focus specification is empty")
    if any(v < 0 for v in values):
        raise UsageError(f"focus values must be >= 0 diopters: '{spec}'")
    return values


def write_csv(df: pd.DataFrame, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    return path


def format_report_row(name: str, value: Any, unit: str = "", ok: Optional[bool] = None) -> list:
    """Format a row for a report table"""
    if isinstance(value, float):
        text = f"{value:,.4f}" if abs(value) < 1e5 else f"{value:,.1f}"
    else:
        text = str(value)

    if ok is None:
        status = ""
    elif ok:
        status = f"{Fore.GREEN}OK{Style.RESET_ALL}"
    else:
        status = f"{Fore.RED}FAIL{Style.RESET_ALL}"

    return [
        f"{Fore.CYAN}{name}{Style.RESET_ALL}",
        f"{Fore.WHITE}{text}{Style.RESET_ALL}",
        f"{Fore.YELLOW}{unit}{Style.RESET_ALL}",
        status,
    ]


def print_report(title: str, table_rows: list) -> None:
    """Print a report in a nicely formatted table"""
    print(f"\n{Fore.WHITE}{Style.BRIGHT}{title.upper()}:{Style.RESET_ALL}")
    print(
        tabulate(
            table_rows,
            headers=["Quantity", "Value", "Unit", "Status"],
            tablefmt="grid",
            colalign=("left", "right", "left", "center"),
        )
    )
    print()


def half_max_span(profile: np.ndarray, peak_index: int, threshold: float) -> Optional[Tuple[float, float]]:
    """
    Fractional sample positions where profile drops below threshold on each side of peak_index,
    linearly interpolated. None when one side never drops below it.
    """
    n = len(profile)
    left = peak_index
    while left > 0 and profile[left - 1] >= threshold:
        left -= 1
    right = peak_index
    while right < n - 1 and profile[right + 1] >= threshold:
        right += 1
    if left == 0 or right == n - 1:
        return None
    lo_a, lo_b = profile[left - 1], profile[left]
    hi_a, hi_b = profile[right], profile[right + 1]
    left_pos = (left - 1) + (threshold - lo_a) / (lo_b - lo_a)
    right_pos = right + (hi_a - threshold) / (hi_a - hi_b)
    return float(left_pos), float(right_pos)
