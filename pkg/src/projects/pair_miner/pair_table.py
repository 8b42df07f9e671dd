from pathlib import Path

import pandas as pd

from src.entities import PAIR_COLUMNS, PairRecord
from src.services.utils import FileReader, FileWriter
from .mining_exceptions import MetadataFormatError


class PairTable:
    """ Pair lists as tab-separated tables, one pair per line under a PAIR_COLUMNS header. """

    @staticmethod
    def write_pairs(pairs: list[PairRecord], path_to_file: Path) -> Path:
        df: pd.DataFrame = pd.DataFrame([pair.to_row() for pair in pairs], columns=PAIR_COLUMNS, dtype=str)
        return FileWriter.write_tsv_file(df, path_to_file)

    @staticmethod
    def read_pairs(path_to_file: Path) -> list[PairRecord]:
        table: pd.DataFrame = FileReader.read_tsv_file(path_to_file)
        if list(table.columns) != PAIR_COLUMNS:
            raise MetadataFormatError(f"{path_to_file}: expected columns {PAIR_COLUMNS}, got {list(table.columns)}.")

        try:
            return [PairRecord.from_row(row) for row in table.to_dict(orient="records")]
        except (KeyError, ValueError) as e:
            raise MetadataFormatError(f"{path_to_file}: malformed pair row ({e}).")
