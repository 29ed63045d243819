from langgraph.graph import END, StateGraph

from src.graph import (PipelineState, StartNode, PlanNode, FilterNode, RenderNode, SimulateNode, AnalyzeNode,
                       OracleNode, ManifestNode, BaseNode)
from src.utils.constants import Subcommand

SUBCOMMAND_NODES = {
    Subcommand.PLAN: PlanNode,
    Subcommand.FILTER: FilterNode,
    Subcommand.RENDER: RenderNode,
    Subcommand.SIMULATE: SimulateNode,
    Subcommand.ANALYZE: AnalyzeNode,
    Subcommand.ORACLE: OracleNode,
}


class Workflow:
    @staticmethod
    def create_workflow(subcommand: Subcommand) -> StateGraph:
        """Create the workflow for one subcommand: start -> subcommand -> manifest."""
        workflow = StateGraph(PipelineState)

        workflow.add_node("start_node", StartNode())

        node_name = f"{subcommand.value}_node"
        node: BaseNode = SUBCOMMAND_NODES[subcommand]()
        workflow.add_node(node_name, node)
        workflow.add_edge("start_node", node_name)

        # every run ends with its manifest
        workflow.add_node("manifest_node", ManifestNode())
        workflow.add_edge(node_name, "manifest_node")
        workflow.add_edge("manifest_node", END)

        workflow.set_entry_point("start_node")

        return workflow
