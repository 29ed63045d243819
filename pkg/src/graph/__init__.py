from .state import PipelineState
from .base_node import BaseNode
from .start_node import StartNode
from .plan_node import PlanNode, plan_summary
from .filter_node import FilterNode, build_filter
from .render_node import RenderNode, build_target, parse_grid
from .simulate_node import SimulateNode
from .analyze_node import AnalyzeNode
from .oracle_node import OracleNode
from .manifest_node import ManifestNode

__all__ = [
    'PipelineState',
    'BaseNode',
    'StartNode',
    'PlanNode',
    'plan_summary',
    'FilterNode',
    'build_filter',
    'RenderNode',
    'build_target',
    'parse_grid',
    'SimulateNode',
    'AnalyzeNode',
    'OracleNode',
    'ManifestNode',
]
