from typing import Dict, Any

import yaml

from src import __version__
from src.utils.constants import RUN_MANIFEST
from .base_node import BaseNode, PipelineState

TOOL_NAME = "dense-focal-stack"


def _plain(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return str(value)


class ManifestNode(BaseNode):
    """
    Records what produced the run's outputs. Two runs with the same config, arguments and seed write
    identical manifests.
    """

    def __call__(self, state: PipelineState) -> Dict[str, Any]:
        s = self.settings(state)
        manifest = {
            "tool": TOOL_NAME,
            "version": __version__,
            "subcommand": state["metadata"]["subcommand"],
            "seed": s.seed,
            "args": {k: _plain(v) for k, v in sorted(self.args(state).items())},
            "config": s.model_dump(mode="json"),
            "artifacts": dict(sorted(state["data"].get("artifacts", {}).items())),
        }
        path = self.out_dir(state) / RUN_MANIFEST
        with open(path, "w") as f:
            yaml.safe_dump(manifest, f, sort_keys=False)
        return self.artifacts(manifest=path)
