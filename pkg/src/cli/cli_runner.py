import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, TextIO

from src.entities import PipelineConfig
from src.services.utils import Logger, PipelineError
from .argument_parser import build_parser, config_overrides
from .config_loader import ConfigLoader
from .crawler_commands import CrawlerCommands
from .stage_commands import StageCommands


logger = Logger("CliRunner")


CommandHandler = Callable[[argparse.Namespace, PipelineConfig], dict[str, Any]]

HANDLERS: dict[str, CommandHandler] = {
    "identify": CrawlerCommands.identify,
    "manifest": CrawlerCommands.manifest,
    "fetch": CrawlerCommands.fetch,
    "parse": StageCommands.parse,
    "orient": StageCommands.orient,
    "orbit": StageCommands.orbit,
    "align": StageCommands.align,
    "mine": StageCommands.mine,
    "warp": StageCommands.warp,
    "eval": StageCommands.evaluate,
    "split": StageCommands.split,
    "mask-keypoints": StageCommands.mask_keypoints,
}

# Namespace entries that are not part of the planned work
_NON_PLAN_ARGS: frozenset[str] = frozenset({"command", "config", "set", "dry_run"})


class CliRunner:
    @staticmethod
    def emit(record: dict[str, Any], stream: TextIO | None = None) -> None:
        """ One machine-readable summary line on stdout. """
        (stream or sys.stdout).write(json.dumps(record, sort_keys=True, default=str) + "\n")

    @staticmethod
    def plan(args: argparse.Namespace) -> dict[str, Any]:
        return {
            key: (str(value) if isinstance(value, Path) else value)
            for key, value in sorted(vars(args).items())
            if key not in _NON_PLAN_ARGS and value is not None
        }

    @classmethod
    def run(cls, argv: list[str] | None = None) -> int:
        """ Parse, load config, dispatch. 0 on success, 2 on config errors, 1 on data errors. """
        try:
            args: argparse.Namespace = build_parser().parse_args(argv)
            overrides: dict[str, Any] = {**ConfigLoader.parse_assignments(args.set), **config_overrides(args)}
            config: PipelineConfig = ConfigLoader.load_config(args.config, overrides)

            if args.dry_run:
                cls.emit({
                    "status": "dry-run",
                    "command": args.command,
                    "config": config.to_dict(),
                    "plan": cls.plan(args),
                })
                return 0

            summary: dict[str, Any] = HANDLERS[args.command](args, config)

        except PipelineError as e:
            logger.error(f"{type(e).__name__}: {e.message}")
            cls.emit({"status": "error", "error": type(e).__name__, "message": e.message})
            return e.exit_code

        cls.emit({"status": "ok", "command": args.command, **summary})
        return 0
