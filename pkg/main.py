import argparse
import logging
import sys
from typing import List, Optional

from colorama import Fore, Style

from src.pipeline import Pipeline
from src.utils.constants import FilterMethod, Subcommand
from src.utils.exceptions import FocalStackError
from src.utils.settings import Settings, load_settings, parse_settings
from src.control import SCENARIOS

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description="Dense focal stack display toolkit: plan, filter, render, "
                                            "simulate, analyze, oracle")
    p.add_argument("--config", default=None, help="YAML config (default: config.yaml next to the package)")
    p.add_argument("--seed", type=int, default=None, help="overrides the config seed")
    p.add_argument("--out", default=None, help="output directory (overrides output_dir)")
    sub = p.add_subparsers(dest="subcommand", required=True)

    sub.add_parser(Subcommand.PLAN.value, help="design numbers for the configured display and layout")

    f = sub.add_parser(Subcommand.FILTER.value, help="decompose an image + depth scene into a focal stack")
    f.add_argument("--image", required=True, help="8/16-bit grayscale or RGB raster")
    f.add_argument("--depth", required=True, help="DFDM binary depth map")
    f.add_argument("--method", default=FilterMethod.LINEAR.value, choices=[m.value for m in FilterMethod])
    f.add_argument("--depth-units", dest="depth_units", default="diopter", choices=["diopter", "meter"])

    r = sub.add_parser(Subcommand.RENDER.value, help="retinal images over a focus sweep")
    r.add_argument("--focus", default=None, help="'sweep:<start>:<stop>:<count>' or '0,0.5,2' (diopters)")
    target = r.add_mutually_exclusive_group(required=True)
    target.add_argument("--stack", help="focal stack directory written by filter")
    target.add_argument("--psf-grid", dest="psf_grid", nargs="?", const="",
                        help="one spot per plane on a <rows>x<cols> grid (default: render.psf_grid_rows x cols)")
    target.add_argument("--slit", type=int, help="vertical slit on the given plane index")

    s = sub.add_parser(Subcommand.SIMULATE.value, help="run the focal-length tracking controller")
    s.add_argument("--scenario", default="prototype", choices=sorted(SCENARIOS))
    s.add_argument("--duration", type=float, default=None, help="seconds (default: scenario duration)")

    a = sub.add_parser(Subcommand.ANALYZE.value, help="measure rendered PSF grids or slits")
    a.add_argument("--images", required=True, help="render directory written by render")

    sub.add_parser(Subcommand.ORACLE.value, help="light-field check of the single-plane bandwidth")
    return p


def resolve_settings(args: argparse.Namespace) -> Settings:
    settings = load_settings(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["output_dir"] = args.out
    if not overrides:
        return settings
    data = settings.model_dump(mode="json")
    data.update(overrides)
    return parse_settings(data)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = resolve_settings(args)
        logging.basicConfig(level=settings.log_level,
                            format="%(asctime)s %(levelname)s %(name)s: %(message)s")
        subcommand = Subcommand.from_string(args.subcommand)
        command_args = {k: v for k, v in vars(args).items()
                        if k not in ("config", "seed", "out", "subcommand") and v is not None}
        result = Pipeline.run(subcommand, settings, command_args)
    except FocalStackError as e:
        print(f"{Fore.RED}error: {e}{Style.RESET_ALL}", file=sys.stderr)
        return 1
    print(f"{Fore.GREEN}{args.subcommand} finished:{Style.RESET_ALL} "
          f"{len(result.get('artifacts', {}))} artifact(s) in {settings.output_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
