import logging
from pathlib import Path
from typing import Dict, Any

from src.utils.settings import Settings
from .state import PipelineState

logger = logging.getLogger(__name__)


class BaseNode:
    def __call__(self, state: PipelineState) -> Dict[str, Any]:
        raise NotImplementedError("Subclasses must implement __call__")

    @staticmethod
    def settings(state: PipelineState) -> Settings:
        return state["metadata"]["settings"]

    @staticmethod
    def out_dir(state: PipelineState) -> Path:
        return Path(state["metadata"]["out_dir"])

    @staticmethod
    def args(state: PipelineState) -> Dict[str, Any]:
        return state["data"].get("args", {})

    @staticmethod
    def artifacts(**paths) -> Dict[str, Any]:
        """State update recording written files under data.artifacts."""
        for name, path in paths.items():
            logger.info("wrote %s: %s", name, path)
        return {"data": {"artifacts": {name: str(path) for name, path in paths.items()}}}
