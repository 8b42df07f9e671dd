import argparse
from pathlib import Path
from typing import NoReturn

from src.services.utils import ConfigError


COMMANDS: tuple[str, ...] = (
    "identify", "manifest", "fetch",
    "parse", "orient", "orbit",
    "align", "mine", "warp", "eval", "split",
    "mask-keypoints",
)

# argparse dest -> PipelineConfig key, for flags that override the config file
CONFIG_FLAGS: dict[str, str] = {
    "seed": "seed",
    "jobs": "jobs",
    "model_format": "model_format",
    "lenient": "lenient",
    "min_shared": "min_shared",
    "max_dt": "max_dt",
    "aspect_tol": "aspect_tol",
    "depth_quantile": "depth_quantile",
    "score_threshold": "score_threshold",
    "target_size": "target_size",
    "orbit_k": "orbit_k",
    "holdout_scenes": "holdout_scenes",
    "val_pairs": "val_pairs",
    "ransac_iterations": "ransac_iterations",
    "inlier_threshold": "inlier_threshold",
    "scale_only": "scale_only",
    "invert_input": "invert_input",
    "discontinuity_threshold": "discontinuity_threshold",
    "border_fraction": "border_fraction",
    "max_depth": "max_depth",
    "user_agent": "user_agent",
}


class _ArgumentParser(argparse.ArgumentParser):
    """ Argument errors become ConfigError so they share the structured error report. """

    def error(self, message: str) -> NoReturn:
        raise ConfigError(f"{self.prog}: {message}")


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key=value config file")
    common.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one config value")
    common.add_argument("--seed", type=int)
    common.add_argument("--jobs", type=int, help="worker processes of batch stages")
    common.add_argument("--dry-run", action="store_true", help="print the resolved config and plan, write nothing")
    return common


def _model_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", type=Path, required=True, help="sparse model directory")
    parser.add_argument("--format", dest="model_format", choices=("AUTO", "BINARY", "TEXT"))
    parser.add_argument("--lenient", action="store_const", const=True, help="drop dangling references")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="scene-pairs", description="Scene pair mining, warping and evaluation toolkit.")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
    common = _common_parser()

    ### Scene crawler ###

    identify = subparsers.add_parser("identify", parents=[common], help="identify scene categories")
    identify.add_argument("--classes", required=True, help="comma-separated class ids")
    identify.add_argument("--fixtures", type=Path, help="offline fixture directory")
    identify.add_argument("--max-depth", dest="max_depth", type=int)
    identify.add_argument("--user-agent", dest="user_agent")
    identify.add_argument("--out", type=Path, required=True, help="scene records (JSON lines)")

    manifest = subparsers.add_parser("manifest", parents=[common], help="build image manifests of scenes")
    manifest.add_argument("--scenes", type=Path, required=True)
    manifest.add_argument("--fixtures", type=Path)
    manifest.add_argument("--user-agent", dest="user_agent")
    manifest.add_argument("--include-unlicensed", action="store_true")
    manifest.add_argument("--out", type=Path, required=True, help="manifest records (JSON lines)")

    fetch = subparsers.add_parser("fetch", parents=[common], help="fetch the files of a manifest")
    fetch.add_argument("--manifest", type=Path, required=True)
    fetch.add_argument("--user-agent", dest="user_agent")
    fetch.add_argument("--out", type=Path, required=True)

    ### Sparse model ###

    parse = subparsers.add_parser("parse", parents=[common], help="parse and validate a sparse model")
    _model_arguments(parse)
    parse.add_argument("--out", type=Path, help="re-write the model here")
    parse.add_argument("--out-format", choices=("BINARY", "TEXT"), default="BINARY")

    orient = subparsers.add_parser("orient", parents=[common], help="gravity-align a sparse model")
    _model_arguments(orient)
    orient.add_argument("--out", type=Path, required=True)
    orient.add_argument("--out-format", choices=("BINARY", "TEXT"), default="BINARY")

    orbit = subparsers.add_parser("orbit", parents=[common], help="orbit references and their pairs")
    _model_arguments(orbit)
    orbit.add_argument("--k", dest="orbit_k", type=int)
    orbit.add_argument("--min-shared", dest="min_shared", type=int)
    orbit.add_argument("--out", type=Path, help="pair list (tab-separated)")

    ### Pipeline stages ###

    align = subparsers.add_parser("align", parents=[common], help="align monocular depth to SfM depth")
    _model_arguments(align)
    align.add_argument("--depth-dir", type=Path, required=True, help="monocular depth per image")
    align.add_argument("--iterations", dest="ransac_iterations", type=int)
    align.add_argument("--inlier-threshold", dest="inlier_threshold", type=float)
    align.add_argument("--scale-only", dest="scale_only", action="store_const", const=True)
    align.add_argument("--invert-input", dest="invert_input", action="store_const", const=True)
    align.add_argument("--out", type=Path, required=True)

    mine = subparsers.add_parser("mine", parents=[common], help="mine image pairs")
    _model_arguments(mine)
    mine.add_argument("--metadata", type=Path, help="sidecar manifest (name, timestamp, width, height)")
    mine.add_argument("--images", type=Path, help="image directory, EXIF is read when no sidecar is given")
    mine.add_argument("--depth-dir", type=Path, help="aligned depth per image for translation scales")
    mine.add_argument("--scene-id", default="")
    mine.add_argument("--min-shared", dest="min_shared", type=int)
    mine.add_argument("--max-dt", dest="max_dt", type=float)
    mine.add_argument("--aspect-tol", dest="aspect_tol", type=float)
    mine.add_argument("--quantile", dest="depth_quantile", type=float)
    mine.add_argument("--scores", type=Path, help="pair scores (ref_image_id, tgt_image_id, score)")
    mine.add_argument("--score-threshold", dest="score_threshold", type=float)
    mine.add_argument("--exclude", type=Path, help="scene ids to reject, one per line")
    mine.add_argument("--out", type=Path, required=True)

    warp = subparsers.add_parser("warp", parents=[common], help="render depth-based warps of pairs")
    _model_arguments(warp)
    warp.add_argument("--pairs", type=Path, help="pair list; --ref/--tgt warp a single pair")
    warp.add_argument("--ref", type=int)
    warp.add_argument("--tgt", type=int)
    warp.add_argument("--images", type=Path, required=True)
    warp.add_argument("--depth-dir", type=Path, required=True, help="aligned depth per image")
    warp.add_argument("--target-size", dest="target_size", type=int)
    warp.add_argument("--discontinuity-threshold", dest="discontinuity_threshold")
    warp.add_argument("--out", type=Path, required=True)

    evaluate = subparsers.add_parser("eval", parents=[common], help="masked reconstruction metrics")
    _model_arguments(evaluate)
    evaluate.add_argument("--pairs", type=Path, required=True)
    evaluate.add_argument("--generated", type=Path, required=True, help="generated images named <pair stem>.png")
    evaluate.add_argument("--images", type=Path, required=True, help="target images")
    evaluate.add_argument("--warps", type=Path, required=True, help="warp outputs with the validity masks")
    evaluate.add_argument("--target-size", dest="target_size", type=int)
    evaluate.add_argument("--out", type=Path, required=True)

    split = subparsers.add_parser("split", parents=[common], help="train/val/test split by scene")
    split.add_argument("--pairs", type=Path, nargs="+", required=True)
    split.add_argument("--holdout", dest="holdout_scenes", type=int)
    split.add_argument("--val-pairs", dest="val_pairs", type=int)
    split.add_argument("--out", type=Path, required=True)

    mask = subparsers.add_parser("mask-keypoints", parents=[common], help="drop keypoints near image borders")
    mask.add_argument("--keypoints", type=Path, required=True, help="keypoint file or directory of *.txt")
    mask.add_argument("--pair-labels", type=Path, help="pair, watermark table; mask only when it triggers")
    mask.add_argument("--border-fraction", dest="border_fraction", type=float)
    mask.add_argument("--out", type=Path, required=True)

    return parser


def config_overrides(args: argparse.Namespace) -> dict[str, object]:
    """ Config values given as dedicated flags. """
    return {
        key: getattr(args, dest)
        for dest, key in CONFIG_FLAGS.items()
        if getattr(args, dest, None) is not None
    }
