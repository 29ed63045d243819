from typing import Dict, Any

import yaml

from src.control import TrackingSimulator, scenario_settings
from .base_node import BaseNode, PipelineState


class SimulateNode(BaseNode):
    """Run the tracking controller for a scenario; writes the trace, a metrics summary and a plot."""

    def __call__(self, state: PipelineState) -> Dict[str, Any]:
        args = self.args(state)
        s = scenario_settings(args.get("scenario") or "prototype", self.settings(state))
        simulator = TrackingSimulator.from_settings(s, duration_s=args.get("duration"))
        simulator.run()
        simulator.analyze()

        out_dir = self.out_dir(state)
        metrics_path = out_dir / "metrics.yaml"
        summary = {k: (v if isinstance(v, int) else float(v)) for k, v in simulator.summary().items()}
        with open(metrics_path, "w") as f:
            yaml.safe_dump(summary, f, sort_keys=False)
        update = self.artifacts(trace=simulator.save_trace(out_dir / "trace.csv"), metrics=metrics_path,
                                plot=simulator.plot(out_dir / "tracking.png"))
        update["data"]["metrics"] = summary
        # later nodes, the run manifest included, see the scenario-resolved config
        update["metadata"] = {"settings": s}
        return update
