"""
start node
"""
import logging
from typing import Dict, Any

from .base_node import BaseNode, PipelineState

logger = logging.getLogger(__name__)


class StartNode(BaseNode):
    """
    start node, prepares the output directory
    """

    def __call__(self, state: PipelineState) -> Dict[str, Any]:
        out_dir = self.out_dir(state)
        out_dir.mkdir(parents=True, exist_ok=True)
        logger.info("%s: output to %s, seed %d", state["metadata"]["subcommand"], out_dir,
                    self.settings(state).seed)
        return {"data": {"name": "StartNode", "artifacts": {}}}
