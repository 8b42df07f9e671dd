from joblib import Parallel, delayed

from src.entities import (
    DepthMap,
    ImageMeta,
    MiningParams,
    PairRecord,
    RelativePose,
    SparseModel,
)
from src.services.coordinate_operations import DepthQuantile, GeometryError, OrbitSampler, PoseOperations
from src.services.utils import Logger, execution_time_logger
from src.projects.depth_alignment.sparse_depth_extractor import SparseDepthExtractor
from src.projects.depth_alignment.alignment_exceptions import AlignmentError
from .covisibility import Covisibility
from .mining_exceptions import MissingMetadataError


logger = Logger("PairMiner")


class PairMiner:
    @classmethod
    @execution_time_logger
    def mine_pairs(
            cls,
            model: SparseModel,
            metas: dict[int, ImageMeta],
            params: MiningParams,
            scene_id: str = "",
            depths: dict[int, DepthMap] | None = None,
            jobs: int = 1,
    ) -> list[PairRecord]:
        """
        Ordered pairs (both directions) that share at least min_shared points, were
        captured within max_dt seconds of each other and have the same aspect ratio
        up to aspect_tol. Sorted by (scene id, reference id, target id).
        """
        missing: list[int] = sorted(image_id for image_id in model.images if image_id not in metas)
        if missing:
            raise MissingMetadataError(f"No metadata for registered images {missing}.")

        graph: dict[tuple[int, int], int] = Covisibility.covisibility_graph(model)

        candidates: list[tuple[int, int, int, float]] = []
        for (image_a, image_b), shared in graph.items():
            timestamp_delta: float | None = cls.accepts(metas[image_a], metas[image_b], shared, params)
            if timestamp_delta is None:
                continue
            candidates.append((image_a, image_b, shared, timestamp_delta))
            candidates.append((image_b, image_a, shared, timestamp_delta))

        logger.info(f"Scene {scene_id!r}: {len(graph)} covisible pairs, {len(candidates)} ordered pairs pass filters")

        references: list[int] = sorted({ref for ref, _, _, _ in candidates})
        scales: list[float | None] = Parallel(n_jobs=jobs)(
            delayed(cls.translation_scale)(model, ref, params.depth_quantile, (depths or {}).get(ref))
            for ref in references
        )
        scale_by_ref: dict[int, float | None] = dict(zip(references, scales))

        records: list[PairRecord] = []
        for ref, tgt, shared, timestamp_delta in candidates:
            scale: float | None = scale_by_ref[ref]
            if scale is None:
                continue

            relative: RelativePose = PoseOperations.relative_pose(model.images[ref].pose, model.images[tgt].pose)
            records.append(PairRecord(
                scene_id=scene_id,
                ref_image_id=ref,
                tgt_image_id=tgt,
                shared_points=shared,
                timestamp_delta=timestamp_delta,
                relative=relative,
                translation_scale=scale,
                aspect_ratio=metas[ref].aspect_ratio,
            ))

        return sorted(records, key=lambda record: record.sort_key)

    @staticmethod
    def accepts(meta_a: ImageMeta, meta_b: ImageMeta, shared: int, params: MiningParams) -> float | None:
        """ |dt| of a pair passing all three filters, None when any filter rejects it. """
        if shared < params.min_shared:
            return None

        # Unknown capture time cannot certify the lighting window
        if meta_a.timestamp is None or meta_b.timestamp is None:
            return None
        timestamp_delta: float = abs(meta_b.timestamp - meta_a.timestamp)
        if timestamp_delta > params.max_dt:
            return None

        ratio_a, ratio_b = meta_a.aspect_ratio, meta_b.aspect_ratio
        if abs(ratio_a - ratio_b) / max(ratio_a, ratio_b) > params.aspect_tol:
            return None

        return timestamp_delta

    @staticmethod
    def translation_scale(
            model: SparseModel,
            image_id: int,
            quantile: float,
            depth: DepthMap | None = None,
    ) -> float | None:
        """ Quantile depth of the aligned dense depth, or of the sparse SfM depths when there is none. """
        try:
            if depth is not None:
                return DepthQuantile.depth_quantile_scale(depth, quantile)
            sparse_depths = SparseDepthExtractor.sparse_depth_for_image(model, image_id).depths
            return DepthQuantile.nearest_rank(sparse_depths, quantile)

        except (AlignmentError, GeometryError) as e:
            logger.warning(f"Image {image_id} skipped as reference: {e.message}")
            return None

    @staticmethod
    def orbit_pairs(model: SparseModel, k: int, min_shared: int) -> list[tuple[int, int]]:
        """ Every orbit reference paired with each image sharing at least min_shared points. """
        graph: dict[tuple[int, int], int] = Covisibility.covisibility_graph(model)
        pairs: list[tuple[int, int]] = []

        for ref in OrbitSampler.sample_orbit_references(model, k):
            for tgt in sorted(model.images):
                if tgt != ref and Covisibility.shared_points(graph, ref, tgt) >= min_shared:
                    pairs.append((ref, tgt))

        return sorted(pairs)

    @staticmethod
    def apply_exclusion_list(scene_ids: list[str], excluded: list[str]) -> list[str]:
        """ Scene ids not on the manual rejection list, input order kept. """
        excluded_set: set[str] = set(excluded)
        kept: list[str] = [scene_id for scene_id in scene_ids if scene_id not in excluded_set]
        if len(kept) != len(scene_ids):
            logger.info(f"Excluded {len(scene_ids) - len(kept)} of {len(scene_ids)} scenes")
        return kept

    @classmethod
    def exclude_pairs(cls, pairs: list[PairRecord], excluded: list[str]) -> list[PairRecord]:
        kept_scenes: set[str] = set(cls.apply_exclusion_list(sorted({pair.scene_id for pair in pairs}), excluded))
        return [pair for pair in pairs if pair.scene_id in kept_scenes]
