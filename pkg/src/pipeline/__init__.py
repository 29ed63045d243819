from .workflow import Workflow, SUBCOMMAND_NODES
from .pipeline import Pipeline

__all__ = ['Pipeline', 'Workflow', 'SUBCOMMAND_NODES']
