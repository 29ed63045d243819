import logging
from pathlib import Path
from typing import Dict, Any

import numpy as np
import pandas as pd
import yaml

from src.data import load_image
from src.metrics import fit_reliable_spots, measure_spots, mtf_from_slit
from src.utils.constants import TARGETS_MANIFEST
from src.utils.exceptions import DegenerateFitError, UsageError
from src.utils.util_func import format_report_row, print_report, write_csv
from .base_node import BaseNode, PipelineState

logger = logging.getLogger(__name__)

FIT_COLUMNS = ['focus_diopter', 'slope_px_per_diopter', 'intercept_px', 'r_squared', 'reliable_spots']
MTF50_COLUMNS = ['focus_diopter', 'mtf50', 'first_zero']


class AnalyzeNode(BaseNode):
    """Blur diameters of rendered PSF grids, or MTFs of rendered slits."""

    def __call__(self, state: PipelineState) -> Dict[str, Any]:
        s = self.settings(state)
        images = self.args(state).get("images")
        if not images:
            raise UsageError("analyze needs --images <render directory>")
        images = Path(images)
        index_path, targets_path = images / "render_index.csv", images / TARGETS_MANIFEST
        if not index_path.exists() or not targets_path.exists():
            raise UsageError(f"{images} holds no render_index.csv and {TARGETS_MANIFEST}; run render first")
        index = pd.read_csv(index_path)
        with open(targets_path) as f:
            targets = yaml.safe_load(f)

        if targets["kind"] == "psf_grid":
            return self.analyze_psf_grid(state, images, index, targets, s.analyze.reliability_floor_px)
        if targets["kind"] == "slit":
            return self.analyze_slit(state, images, index, targets, s.analyze.mtf_pad)
        raise UsageError(f"nothing to measure on a '{targets['kind']}' render; use --psf-grid or --slit")

    def analyze_psf_grid(self, state, images: Path, index: pd.DataFrame, targets: dict, floor: float):
        centers = [tuple(c) for c in targets["centers"]]
        frames, fits = [], []
        for focus, name in index.itertuples(index=False):
            spots = measure_spots(load_image(images / name), centers, targets["depths_diopter"], focus,
                                  targets["cell_px"], reliability_floor_px=floor)
            frames.append(spots)
            reliable = int((spots["confidence"] == "ok").sum())
            try:
                fit = fit_reliable_spots(spots)
                fits.append([focus, fit.slope, fit.intercept, fit.r_squared, reliable])
            except DegenerateFitError:
                logger.warning("focus %.4f D: %d reliable spots, no fit", focus, reliable)
                fits.append([focus, np.nan, np.nan, np.nan, reliable])
        fit_frame = pd.DataFrame(fits, columns=FIT_COLUMNS)
        out_dir = self.out_dir(state)
        rows = [format_report_row(f"Focus {r.focus_diopter:.4f} D", r.r_squared, "R^2",
                                  None if np.isnan(r.r_squared) else r.r_squared >= 0.99)
                for r in fit_frame.itertuples()]
        print_report("Blur linearity", rows)
        return self.artifacts(spots=write_csv(pd.concat(frames, ignore_index=True), out_dir / "spots.csv"),
                              blur_fit=write_csv(fit_frame, out_dir / "blur_fit.csv"))

    def analyze_slit(self, state, images: Path, index: pd.DataFrame, targets: dict, pad: int):
        out_dir = self.out_dir(state)
        summary = []
        for k, (focus, name) in enumerate(index.itertuples(index=False)):
            curve = mtf_from_slit(load_image(images / name), axis=0, pad=pad,
                                  samples_per_pixel=targets["oversample"])
            write_csv(curve.to_frame(), out_dir / "mtf" / f"focus_{k:03d}.csv")
            first_zero = curve.first_zero
            summary.append([focus, curve.mtf50, np.nan if first_zero is None else first_zero])
        frame = pd.DataFrame(summary, columns=MTF50_COLUMNS)
        print_report("Slit MTF50", [format_report_row(f"Focus {r.focus_diopter:.4f} D", r.mtf50, "cycles/px")
                                    for r in frame.itertuples()])
        return self.artifacts(mtf=out_dir / "mtf", mtf50=write_csv(frame, out_dir / "mtf50.csv"))
