from typing import Any, Dict, TypedDict, Annotated

from src.utils.util_func import deep_merge_dicts


class PipelineState(TypedDict):
    data: Annotated[Dict[str, Any], deep_merge_dicts]
    metadata: Annotated[Dict[str, Any], deep_merge_dicts]
