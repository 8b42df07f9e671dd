from pathlib import Path

import pandas as pd

from src.entities import PairRecord
from src.services.utils import FileReader, Logger
from .mining_exceptions import MetadataFormatError, MissingScoreError


logger = Logger("PairFilter")


SCORE_COLUMNS: tuple[str, ...] = ("ref_image_id", "tgt_image_id", "score")


class PairFilter:
    @staticmethod
    def filter_pairs_by_score(
            pairs: list[PairRecord],
            scores: dict[tuple[int, int], float],
            threshold: float,
    ) -> list[PairRecord]:
        """ Keeps exactly the pairs scored at or above threshold; a score of (b, a) also covers (a, b). """
        kept: list[PairRecord] = []
        for pair in pairs:
            score: float | None = scores.get(pair.pair_id)
            if score is None:
                score = scores.get((pair.tgt_image_id, pair.ref_image_id))
            if score is None:
                raise MissingScoreError(f"No score for pair {pair.ref_image_id} -> {pair.tgt_image_id}.")

            if score >= threshold:
                kept.append(pair)

        logger.info(f"Score filter at {threshold}: kept {len(kept)} of {len(pairs)} pairs")
        return kept

    @staticmethod
    def read_scores(path_to_file: Path) -> dict[tuple[int, int], float]:
        """ Tab-separated ref_image_id, tgt_image_id, score table. """
        table: pd.DataFrame = FileReader.read_tsv_file(path_to_file)

        missing_columns: list[str] = [column for column in SCORE_COLUMNS if column not in table.columns]
        if missing_columns:
            raise MetadataFormatError(f"{path_to_file}: missing columns {missing_columns}.")

        try:
            return {
                (int(row["ref_image_id"]), int(row["tgt_image_id"])): float(row["score"])
                for row in table.to_dict(orient="records")
            }
        except ValueError as e:
            raise MetadataFormatError(f"{path_to_file}: malformed score row ({e}).")
