import numpy as np

from src.entities import PairRecord, SplitParams
from src.services.utils import Logger
from .mining_exceptions import SplitError


logger = Logger("HoldoutSplitter")


class HoldoutSplitter:
    @staticmethod
    def split_holdout(pairs: list[PairRecord], params: SplitParams) -> dict[str, list[PairRecord]]:
        """
        Seeded choice of holdout scenes. Holdout pairs sorted by (scene id, pair id)
        give the first val_pairs to "val" and the rest to "test"; every other scene is "train".
        """
        scene_ids: list[str] = sorted({pair.scene_id for pair in pairs})
        if params.holdout_scenes < 0 or params.val_pairs < 0:
            raise SplitError("Holdout scene and validation pair counts must be non-negative.")
        if params.holdout_scenes > len(scene_ids):
            raise SplitError(f"Cannot hold out {params.holdout_scenes} of {len(scene_ids)} scenes.")

        rng: np.random.Generator = np.random.default_rng(params.seed)
        chosen: np.ndarray = rng.choice(len(scene_ids), size=params.holdout_scenes, replace=False)
        holdout: set[str] = {scene_ids[int(index)] for index in chosen}

        ordered: list[PairRecord] = sorted(pairs, key=lambda pair: pair.sort_key)
        holdout_pairs: list[PairRecord] = [pair for pair in ordered if pair.scene_id in holdout]

        splits: dict[str, list[PairRecord]] = {
            "train": [pair for pair in ordered if pair.scene_id not in holdout],
            "val": holdout_pairs[:params.val_pairs],
            "test": holdout_pairs[params.val_pairs:],
        }
        logger.info(
            f"Split {len(scene_ids)} scenes ({len(holdout)} held out): "
            f"{len(splits['train'])} train, {len(splits['val'])} val, {len(splits['test'])} test pairs")
        return splits
