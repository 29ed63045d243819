from pathlib import Path
from typing import Any, Dict, Optional

from src.utils.constants import Subcommand
from src.utils.settings import Settings
from .workflow import Workflow


class Pipeline:

    @staticmethod
    def run(
            subcommand: Subcommand,
            settings: Settings,
            args: Optional[Dict[str, Any]] = None,
            out_dir: Optional[Path] = None,
    ) -> Dict[str, Any]:
        """
        Executes one subcommand as a compiled workflow.
        Parameters:
            subcommand (Subcommand): Which node runs between the start and manifest nodes.
            settings (Settings): Validated configuration; its seed drives every random draw of the run.
            args (Dict[str, Any], optional): Subcommand arguments as parsed from the command line, e.g.
                image/depth/method for filter, stack/psf_grid/slit/focus for render, scenario/duration for
                simulate and images for analyze. Defaults to no arguments.
            out_dir (Path, optional): Directory for every written file. Defaults to settings.output_dir.

        Returns:
        The final data section of the workflow state: the args, the written artifacts keyed by name and
        whatever summary values the subcommand node reports.
        """
        workflow = Workflow.create_workflow(subcommand)
        graph = workflow.compile()

        final_state = graph.invoke(
            {
                "data": {
                    "args": dict(args or {}),
                    "artifacts": {},
                },
                "metadata": {
                    "settings": settings,
                    "out_dir": str(out_dir if out_dir is not None else settings.output_dir),
                    "subcommand": subcommand.value,
                },
            },
        )
        return final_state["data"]
