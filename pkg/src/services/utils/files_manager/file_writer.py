import json
from pathlib import Path
from typing import Iterable

import numpy as np
import pandas as pd
from PIL import Image

from ..constants import Constants
from ..logger import Logger
from .file_reader import FileFormatError


logger = Logger("FileWriter")


class FileWriter:
    @staticmethod
    def _prepare_path(path_to_file: Path) -> Path:
        """ Ensure the directory exists. """
        try:
            path_to_file.parent.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise FileFormatError(f"Cannot create directory for {path_to_file}: {e}")
        return path_to_file

    @classmethod
    def write_json_file(
            cls,
            data: dict,
            path_to_file: Path,
    ) -> Path:
        cls._prepare_path(path_to_file)
        with Path(path_to_file).open("w", encoding="utf-8") as json_file:
            json.dump(data, json_file, indent=4, sort_keys=True)
        return path_to_file

    @classmethod
    def write_jsonl_file(
            cls,
            records: Iterable[dict],
            path_to_file: Path,
    ) -> Path:
        """ Write one JSON record per line with sorted keys (byte-stable). """
        cls._prepare_path(path_to_file)
        with Path(path_to_file).open("w", encoding="utf-8", newline="\n") as jsonl_file:
            for record in records:
                jsonl_file.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")

        logger.info(f"File saved: {path_to_file}")
        return path_to_file

    @classmethod
    def write_key_value_file(
            cls,
            data: dict[str, object],
            path_to_file: Path,
    ) -> Path:
        """ Write a flat key=value record in insertion order. """
        cls._prepare_path(path_to_file)
        lines: list[str] = [f"{key}={value}\n" for key, value in data.items()]
        Path(path_to_file).write_text("".join(lines), encoding="utf-8")
        return path_to_file

    @classmethod
    def write_lines(
            cls,
            lines: Iterable[str],
            path_to_file: Path,
    ) -> Path:
        cls._prepare_path(path_to_file)
        with Path(path_to_file).open("w", encoding="utf-8", newline="\n") as text_file:
            for line in lines:
                text_file.write(line if line.endswith("\n") else line + "\n")
        return path_to_file

    @classmethod
    def write_tsv_file(
            cls,
            df: pd.DataFrame,
            path_to_file: Path,
    ) -> Path:
        """ Write a tab-separated table with a header line. """
        cls._prepare_path(path_to_file)
        df.to_csv(path_to_file, sep="\t", index=False, lineterminator="\n")

        logger.info(f"File saved: {path_to_file}")
        return path_to_file

    @classmethod
    def write_pfm_file(
            cls,
            data: np.ndarray,
            path_to_file: Path,
    ) -> Path:
        """ Write a little-endian portable float map; (H, W) -> 'Pf', (H, W, 3) -> 'PF'. """
        if data.ndim == 2:
            tag: str = "Pf"
        elif data.ndim == 3 and data.shape[2] == 3:
            tag = "PF"
        else:
            raise FileFormatError(f"PFM data must be (H, W) or (H, W, 3), got {data.shape}.")

        cls._prepare_path(path_to_file)
        height, width = data.shape[:2]

        with Path(path_to_file).open("wb") as pfm_file:
            pfm_file.write(f"{tag}\n{width} {height}\n-1.0\n".encode("latin-1"))
            pfm_file.write(np.flipud(data).astype("<f4").tobytes())

        return path_to_file

    @classmethod
    def write_depth_png_file(
            cls,
            depth: np.ndarray,
            path_to_file: Path,
            scale: float,
    ) -> Path:
        """ Write depth as 16-bit PNG (value = round(depth / scale), 0 = invalid) plus sidecar record. """
        if scale <= 0:
            raise FileFormatError(f"Depth PNG scale must be positive, got {scale}.")

        cls._prepare_path(path_to_file)
        raw: np.ndarray = np.clip(np.rint(np.nan_to_num(depth) / scale), 0, np.iinfo(np.uint16).max)
        Image.fromarray(raw.astype(np.uint16)).save(path_to_file, format="PNG")

        sidecar_path: Path = path_to_file.with_name(path_to_file.name + Constants.file_names.SIDECAR_SUFFIX)
        cls.write_key_value_file({"scale": repr(float(scale))}, sidecar_path)
        return path_to_file

    @classmethod
    def write_image_file(
            cls,
            rgb: np.ndarray,
            path_to_file: Path,
    ) -> Path:
        cls._prepare_path(path_to_file)
        Image.fromarray(np.ascontiguousarray(rgb, dtype=np.uint8)).save(path_to_file, format="PNG")
        return path_to_file

    @classmethod
    def write_mask_file(
            cls,
            mask: np.ndarray,
            path_to_file: Path,
    ) -> Path:
        """ Write a boolean mask as a 1-bit PNG. """
        cls._prepare_path(path_to_file)
        Image.fromarray(np.ascontiguousarray(mask, dtype=np.uint8) * 255).convert("1").save(
            path_to_file, format="PNG")
        return path_to_file
