from typing import Dict, Any

from src.lightfield import oracle_sweep
from src.optics import DisplayModel, EyeModel
from src.utils.util_func import format_report_row, print_report, write_csv
from .base_node import BaseNode, PipelineState

TOLERANCE = 0.05


class OracleNode(BaseNode):
    """Light-field measurement of the single-plane bandwidth against the closed form."""

    def __call__(self, state: PipelineState) -> Dict[str, Any]:
        s = self.settings(state)
        frame = oracle_sweep(DisplayModel.from_settings(s.display), EyeModel.from_settings(s.eye), s.oracle)
        worst = float(frame["relative_error"].max())
        print_report("Oracle sweep", [
            format_report_row("Configurations", len(frame)),
            format_report_row("Mean relative error", float(frame["relative_error"].mean())),
            format_report_row("Worst relative error", worst, "", worst <= TOLERANCE),
        ])
        update = self.artifacts(oracle=write_csv(frame, self.out_dir(state) / "oracle.csv"))
        update["data"]["worst_relative_error"] = worst
        return update
