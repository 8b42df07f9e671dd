import argparse
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from src.entities import (
    AlignmentParams,
    DepthMap,
    KeypointSet,
    MetricReport,
    PairRecord,
    PipelineConfig,
    SparseModel,
    WarpParams,
)
from src.services.coordinate_operations import GravityAligner, OrbitSampler
from src.services.utils import (
    ConfigError,
    Constants,
    FileReader,
    FileWriter,
    Logger,
    PathBuilder,
    PipelineError,
)
from src.projects.colmap_io import KeypointsIO, KeypointsMasker, ModelFormat, ModelReader, ModelWriter
from src.projects.depth_alignment import DepthAligner
from src.projects.warp_renderer import Warper
from src.projects.pair_miner import (
    HoldoutSplitter,
    ImageResizer,
    MetadataLoader,
    PairFilter,
    PairMiner,
    PairTable,
)
from src.projects.eval_metrics import MetricsAggregator, MetricsCalculator


logger = Logger("StageCommands")


_TRUE_LABELS: frozenset[str] = frozenset({"1", "true", "yes"})


def _error_record(error: PipelineError) -> dict[str, str]:
    return {"error": type(error).__name__, "message": error.message}


class StageCommands:
    """ One method per pipeline command; each returns the summary record printed on stdout. """

    ### SPARSE MODEL ###

    @staticmethod
    def model_format(name: str) -> ModelFormat:
        try:
            return ModelFormat.from_name(name)
        except ValueError as e:
            raise ConfigError(str(e))

    @classmethod
    def load_model(cls, args: argparse.Namespace, config: PipelineConfig) -> SparseModel:
        return ModelReader.parse_model(args.model, cls.model_format(config.model_format), config.lenient)

    @classmethod
    def parse(cls, args: argparse.Namespace, config: PipelineConfig) -> dict[str, Any]:
        model, report = ModelReader.parse_model_with_report(
            args.model, cls.model_format(config.model_format), config.lenient)

        if args.out is not None:
            ModelWriter.write_model(model, args.out, cls.model_format(args.out_format))

        return {
            "cameras": len(model.cameras),
            "images": len(model.images),
            "points": len(model.points),
            "validation": report.to_dict(),
        }

    @classmethod
    def orient(cls, args: argparse.Namespace, config: PipelineConfig) -> dict[str, Any]:
        model: SparseModel = cls.load_model(args, config)
        aligned, transform = GravityAligner.gravity_align(model)
        ModelWriter.write_model(aligned, args.out, cls.model_format(args.out_format))
        return {
            "images": len(aligned.images),
            "rotation_qvec": [float(value) for value in transform.qvec],
            "translation": [float(value) for value in transform.tvec],
        }

    @classmethod
    def orbit(cls, args: argparse.Namespace, config: PipelineConfig) -> dict[str, Any]:
        model, _ = GravityAligner.gravity_align(cls.load_model(args, config))
        references: list[int] = OrbitSampler.sample_orbit_references(model, config.orbit_k)
        pairs: list[tuple[int, int]] = PairMiner.orbit_pairs(model, config.orbit_k, config.min_shared)

        if args.out is not None:
            FileWriter.write_tsv_file(pd.DataFrame(pairs, columns=["ref_image_id", "tgt_image_id"]), args.out)

        return {"references": references, "pairs": len(pairs)}

    ### DEPTH ALIGNMENT ###

    @staticmethod
    def _align_one(
            model: SparseModel,
            image_id: int,
            depth_dir: Path,
            out_dir: Path,
            params: AlignmentParams,
            invert_input: bool,
    ) -> dict[str, Any]:
        name: str = model.images[image_id].name
        record: dict[str, Any] = {"image_id": image_id, "name": name}
        try:
            mono: DepthMap = DepthAligner.load_mono_depth(
                PathBuilder.build_path_to_depth_file(depth_dir, name), invert_input)
            aligned, alignment = DepthAligner.align_image(model, image_id, mono, params)
        except PipelineError as e:
            logger.warning(f"Image {image_id} ({name}) not aligned: {e.message}")
            return {**record, **_error_record(e)}

        FileWriter.write_pfm_file(
            aligned.values.astype(np.float32), PathBuilder.build_path_to_aligned_depth_file(out_dir, name))
        return {**record, **alignment.to_dict()}

    @classmethod
    def align(cls, args: argparse.Namespace, config: PipelineConfig) -> dict[str, Any]:
        model: SparseModel = cls.load_model(args, config)
        records: list[dict[str, Any]] = Parallel(n_jobs=config.jobs)(
            delayed(cls._align_one)(model, image_id, args.depth_dir, args.out, config.alignment, config.invert_input)
            for image_id in sorted(model.images)
        )
        FileWriter.write_jsonl_file(records, args.out / Constants.file_names.ALIGNMENTS_JSONL_FILE)

        failed: int = sum("error" in record for record in records)
        return {"aligned": len(records) - failed, "failed": failed}

    ### PAIRS ###

    @staticmethod
    def _load_aligned_depths(model: SparseModel, depth_dir: Path | None) -> dict[int, DepthMap] | None:
        if depth_dir is None:
            return None

        depths: dict[int, DepthMap] = {}
        for image_id, image in sorted(model.images.items()):
            path_to_file: Path = PathBuilder.build_path_to_aligned_depth_file(depth_dir, image.name)
            if path_to_file.exists():
                depths[image_id] = DepthMap.from_values(FileReader.read_pfm_file(path_to_file))
        return depths

    @classmethod
    def mine(cls, args: argparse.Namespace, config: PipelineConfig) -> dict[str, Any]:
        if args.metadata is None and args.images is None:
            raise ConfigError("mine needs --metadata or --images.")

        model: SparseModel = cls.load_model(args, config)
        metas = MetadataLoader.load_image_metas(model, args.metadata, args.images)
        pairs: list[PairRecord] = PairMiner.mine_pairs(
            model, metas, config.mining, args.scene_id, cls._load_aligned_depths(model, args.depth_dir), config.jobs)
        mined: int = len(pairs)

        if args.exclude is not None:
            pairs = PairMiner.exclude_pairs(pairs, FileReader.read_id_list(args.exclude))
        if args.scores is not None:
            pairs = PairFilter.filter_pairs_by_score(pairs, PairFilter.read_scores(args.scores), config.score_threshold)

        PairTable.write_pairs(pairs, args.out)
        return {"mined": mined, "pairs": len(pairs)}

    @classmethod
    def split(cls, args: argparse.Namespace, config: PipelineConfig) -> dict[str, Any]:
        pairs: list[PairRecord] = [pair for path in args.pairs for pair in PairTable.read_pairs(path)]
        splits: dict[str, list[PairRecord]] = HoldoutSplitter.split_holdout(pairs, config.split)

        for name, split_pairs in splits.items():
            PairTable.write_pairs(split_pairs, args.out / f"{name}.tsv")
        return {name: len(split_pairs) for name, split_pairs in splits.items()}

    ### WARPS ###

    @staticmethod
    def _pair_ids(args: argparse.Namespace, model: SparseModel) -> list[tuple[int, int]]:
        if args.pairs is not None:
            pair_ids: list[tuple[int, int]] = sorted({pair.pair_id for pair in PairTable.read_pairs(args.pairs)})
        elif args.ref is not None and args.tgt is not None:
            pair_ids = [(args.ref, args.tgt)]
        else:
            raise ConfigError("warp needs --pairs or both --ref and --tgt.")

        unknown: list[int] = sorted({image_id for pair in pair_ids for image_id in pair} - set(model.images))
        if unknown:
            raise ConfigError(f"Images {unknown} are not registered in the model.")
        return pair_ids

    @staticmethod
    def _warp_one(
            model: SparseModel,
            ref_image_id: int,
            tgt_image_id: int,
            image_dir: Path,
            depth_dir: Path,
            out_dir: Path,
            params: WarpParams,
            alignment: dict[str, float] | None,
    ) -> dict[str, Any]:
        record: dict[str, Any] = {"ref_image_id": ref_image_id, "tgt_image_id": tgt_image_id}
        try:
            name: str = model.images[ref_image_id].name
            rgb: np.ndarray = FileReader.read_image_file(image_dir / name)
            depth: DepthMap = DepthMap.from_values(
                FileReader.read_pfm_file(PathBuilder.build_path_to_aligned_depth_file(depth_dir, name)))
            output = Warper.warp_pair(
                model, ref_image_id, tgt_image_id, rgb, depth, params, out_dir, alignment)
        except PipelineError as e:
            logger.warning(f"Pair {ref_image_id} -> {tgt_image_id} not warped: {e.message}")
            return {**record, **_error_record(e)}

        return {**record, "coverage": output.coverage}

    @staticmethod
    def _read_alignments(depth_dir: Path) -> dict[int, dict[str, float]]:
        path_to_file: Path = depth_dir / Constants.file_names.ALIGNMENTS_JSONL_FILE
        if not path_to_file.exists():
            return {}
        return {
            int(record["image_id"]): record
            for record in FileReader.read_jsonl_file(path_to_file)
            if "error" not in record
        }

    @classmethod
    def warp(cls, args: argparse.Namespace, config: PipelineConfig) -> dict[str, Any]:
        model: SparseModel = cls.load_model(args, config)
        alignments: dict[int, dict[str, float]] = cls._read_alignments(args.depth_dir)

        records: list[dict[str, Any]] = Parallel(n_jobs=config.jobs)(
            delayed(cls._warp_one)(
                model, ref, tgt, args.images, args.depth_dir, args.out, config.warping, alignments.get(ref))
            for ref, tgt in cls._pair_ids(args, model)
        )

        warped: list[dict[str, Any]] = [record for record in records if "error" not in record]
        mean_coverage: float | None = (
            float(np.mean([record["coverage"] for record in warped])) if warped else None
        )
        return {"warped": len(warped), "failed": len(records) - len(warped), "mean_coverage": mean_coverage}

    ### METRICS ###

    @staticmethod
    def _evaluate_one(
            model: SparseModel,
            pair: PairRecord,
            generated_dir: Path,
            image_dir: Path,
            warp_dir: Path,
            config: PipelineConfig,
    ) -> dict[str, Any]:
        record: dict[str, Any] = {
            "scene_id": pair.scene_id, "ref_image_id": pair.ref_image_id, "tgt_image_id": pair.tgt_image_id}
        try:
            stem: str = PathBuilder.build_pair_stem(pair.ref_image_id, pair.tgt_image_id)
            warp_paths: dict[str, Path] = PathBuilder.build_paths_to_warp_files(
                warp_dir, pair.ref_image_id, pair.tgt_image_id)

            generated: np.ndarray = FileReader.read_image_file(generated_dir / f"{stem}.png")
            mask: np.ndarray = FileReader.read_mask_file(warp_paths["mask"])
            target: np.ndarray = FileReader.read_image_file(image_dir / model.images[pair.tgt_image_id].name)
            if target.shape[:2] != (config.target_size, config.target_size):
                target, _ = ImageResizer.resize_pad(target, config.target_size, config.pad_value)

            report: MetricReport = MetricsCalculator.report_for_mask(generated, target, mask, config.psnr_cap)
        except PipelineError as e:
            logger.warning(f"Pair {pair.ref_image_id} -> {pair.tgt_image_id} not evaluated: {e.message}")
            return {**record, **_error_record(e)}

        logger.metrics(
            f"Pair {pair.ref_image_id} -> {pair.tgt_image_id}: psnr={report.psnr:.4f} ssim={report.ssim:.4f} "
            f"coverage={report.mask_coverage:.4f}")
        return {**record, **report.to_dict()}

    @classmethod
    def evaluate(cls, args: argparse.Namespace, config: PipelineConfig) -> dict[str, Any]:
        model: SparseModel = cls.load_model(args, config)
        pairs: list[PairRecord] = PairTable.read_pairs(args.pairs)
        unknown: list[int] = sorted({pair.tgt_image_id for pair in pairs} - set(model.images))
        if unknown:
            raise ConfigError(f"Images {unknown} are not registered in the model.")

        records: list[dict[str, Any]] = Parallel(n_jobs=config.jobs)(
            delayed(cls._evaluate_one)(model, pair, args.generated, args.images, args.warps, config)
            for pair in pairs
        )
        FileWriter.write_jsonl_file(records, args.out / Constants.file_names.METRICS_JSONL_FILE)

        reports: list[MetricReport] = [
            MetricReport(**{key: record[key] for key in MetricReport.__dataclass_fields__})
            for record in records if "error" not in record
        ]
        totals = MetricsAggregator.aggregate(reports)
        table: pd.DataFrame = MetricsAggregator.build_table(totals)
        FileWriter.write_lines(
            [MetricsAggregator.format_table(table)], args.out / Constants.file_names.METRICS_TABLE_FILE)

        return {
            "evaluated": totals.pairs,
            "failed": len(records) - totals.pairs,
            "means": {name: totals.mean(name) for name in totals.sums},
        }

    ### KEYPOINTS ###

    @staticmethod
    def _read_pair_labels(path_to_file: Path) -> list[tuple[str, bool]]:
        table: pd.DataFrame = FileReader.read_tsv_file(path_to_file)
        if not {"pair", "watermark"} <= set(table.columns):
            raise ConfigError(f"{path_to_file}: expected 'pair' and 'watermark' columns.")
        return [
            (row["pair"], row["watermark"].strip().lower() in _TRUE_LABELS)
            for row in table.to_dict(orient="records")
        ]

    @classmethod
    def mask_keypoints(cls, args: argparse.Namespace, config: PipelineConfig) -> dict[str, Any]:
        if args.keypoints.is_dir():
            paths: list[Path] = [args.keypoints / name for name in FileReader.read_list_of_files(args.keypoints, ".txt")]
        else:
            paths = [args.keypoints]

        triggered: bool = True
        if args.pair_labels is not None:
            triggered = KeypointsMasker.watermark_trigger(
                cls._read_pair_labels(args.pair_labels), config.watermark_ratio)
            logger.info(f"Watermark trigger {'fired' if triggered else 'not fired'}")

        total: int = 0
        kept: int = 0
        for path in paths:
            keypoints: KeypointSet = KeypointsIO.read_keypoints(path)
            if triggered:
                keypoints_out: KeypointSet = KeypointsMasker.mask_border_keypoints(keypoints, config.border_fraction)
            else:
                keypoints_out = keypoints
            KeypointsIO.write_keypoints(keypoints_out, args.out / path.name)
            total += len(keypoints)
            kept += len(keypoints_out)

        return {"files": len(paths), "triggered": triggered, "keypoints": total, "kept": kept}
