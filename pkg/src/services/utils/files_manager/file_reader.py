import json
from typing import Any
from pathlib import Path

import dotenv
import numpy as np
import pandas as pd
from PIL import Image

from ..constants import Constants
from ..logger import Logger
from ..pipeline_exceptions import PipelineError


logger = Logger("FileReader")


class FileFormatError(PipelineError):
    """ A file is missing or does not follow its declared format. """


class FileReader:
    @classmethod
    def read_list_of_files(
            cls,
            folder_path: Path | str,
            format: str | None = None,
    ) -> list[str]:
        """ Read a sorted list of file names in the given folder, optionally filtered by suffix. """
        try:
            return sorted(
                file.name for file in Path(folder_path).iterdir()
                if file.is_file() and (file.name.endswith(format) if format else True)
            )
        except FileNotFoundError:
            logger.error(f"Folder {folder_path} not found.")
            return []

    @staticmethod
    def read_json_file(
            folder_path: Path | str,
            file_name: str,
    ) -> Any:
        """ Read JSON file, None if it does not exist. """

        path_to_file: Path = Path(folder_path) / file_name

        if not path_to_file.exists():
            return None

        data_json: str = Path(path_to_file).read_text(encoding="utf-8")
        return json.loads(data_json)

    @staticmethod
    def read_jsonl_file(path_to_file: Path) -> list[dict]:
        """ Read line-delimited JSON records. """
        if not path_to_file.exists():
            raise FileFormatError(f"File not found: {path_to_file}")

        records: list[dict] = []
        with Path(path_to_file).open("r", encoding="utf-8") as jsonl_file:
            for line_number, line in enumerate(jsonl_file, start=1):
                if not line.strip():
                    continue
                try:
                    records.append(json.loads(line))
                except json.JSONDecodeError as e:
                    raise FileFormatError(f"{path_to_file}:{line_number}: invalid JSON record ({e})")
        return records

    @staticmethod
    def read_key_value_file(path_to_file: Path) -> dict[str, str]:
        """ Read a flat key=value file ('#' comments allowed). """
        if not path_to_file.exists():
            raise FileFormatError(f"File not found: {path_to_file}")

        values: dict[str, str | None] = dotenv.dotenv_values(path_to_file)
        return {key: ("" if value is None else value) for key, value in values.items()}

    @staticmethod
    def read_id_list(path_to_file: Path) -> list[str]:
        """ Read a plain-text list, one id per line; blank and '#' lines are skipped. """
        if not path_to_file.exists():
            raise FileFormatError(f"File not found: {path_to_file}")

        lines: list[str] = Path(path_to_file).read_text(encoding="utf-8").splitlines()
        return [line.strip() for line in lines if line.strip() and not line.lstrip().startswith("#")]

    @staticmethod
    def read_tsv_file(path_to_file: Path) -> pd.DataFrame:
        """ Read a tab-separated table with a header line. """
        if not path_to_file.exists():
            raise FileFormatError(f"File not found: {path_to_file}")

        try:
            return pd.read_csv(
                path_to_file,
                sep="\t",
                comment=None,
                keep_default_na=False,
                dtype=str,
            )
        except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise FileFormatError(f"Failed to read table {path_to_file}: {e}")

    @staticmethod
    def read_pfm_file(path_to_file: Path) -> np.ndarray:
        """
        Read a portable float map. Returns float32 array of shape (H, W) for 'Pf'
        or (H, W, 3) for 'PF', rows ordered top to bottom.
        """
        if not path_to_file.exists():
            raise FileFormatError(f"File not found: {path_to_file}")

        with Path(path_to_file).open("rb") as pfm_file:
            tag: str = pfm_file.readline().decode("latin-1").strip()

            if tag == "Pf":
                channels: int = 1
            elif tag == "PF":
                channels = 3
            else:
                raise FileFormatError(f"{path_to_file} is not a PFM file (tag {tag!r}).")

            try:
                width, height = (int(value) for value in pfm_file.readline().decode("latin-1").split())
                scale: float = float(pfm_file.readline().decode("latin-1").strip())
            except ValueError:
                raise FileFormatError(f"{path_to_file}: malformed PFM header.")

            # Negative scale means little-endian
            dtype: str = "<f4" if scale < 0 else ">f4"
            buffer: bytes = pfm_file.read()

        expected_size: int = width * height * channels * 4
        if len(buffer) < expected_size:
            raise FileFormatError(f"{path_to_file}: truncated PFM data.")

        data: np.ndarray = np.frombuffer(buffer[:expected_size], dtype=dtype).astype(np.float32)
        shape: tuple[int, ...] = (height, width) if channels == 1 else (height, width, 3)

        # PFM stores rows bottom to top
        return np.flipud(data.reshape(shape)).copy()

    @classmethod
    def read_depth_png_file(cls, path_to_file: Path) -> np.ndarray:
        """ Read a 16-bit depth PNG scaled by the 'scale' of its sidecar record; 0 stays 0 (invalid). """
        if not path_to_file.exists():
            raise FileFormatError(f"File not found: {path_to_file}")

        sidecar_path: Path = path_to_file.with_name(path_to_file.name + Constants.file_names.SIDECAR_SUFFIX)
        sidecar: dict[str, str] = cls.read_key_value_file(sidecar_path)

        try:
            scale: float = float(sidecar["scale"])
        except (KeyError, ValueError):
            raise FileFormatError(f"{sidecar_path}: missing or invalid 'scale' entry.")

        with Image.open(path_to_file) as image:
            raw: np.ndarray = np.array(image)

        if raw.ndim != 2:
            raise FileFormatError(f"{path_to_file}: depth PNG must be single-channel.")

        return raw.astype(np.float64) * scale

    @staticmethod
    def read_image_file(path_to_file: Path) -> np.ndarray:
        """ Read an image as uint8 (H, W, 3). """
        if not path_to_file.exists():
            raise FileFormatError(f"File not found: {path_to_file}")

        with Image.open(path_to_file) as image:
            return np.array(image.convert("RGB"), dtype=np.uint8)

    @staticmethod
    def read_mask_file(path_to_file: Path) -> np.ndarray:
        """ Read a mask PNG as bool (H, W). """
        if not path_to_file.exists():
            raise FileFormatError(f"File not found: {path_to_file}")

        with Image.open(path_to_file) as image:
            return np.array(image.convert("L"), dtype=np.uint8) > 0
