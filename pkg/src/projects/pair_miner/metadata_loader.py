from pathlib import Path

import pandas as pd
from PIL import Image, UnidentifiedImageError

from src.entities import ImageMeta, SparseModel
from src.services.utils import FileReader, Logger
from .mining_exceptions import MetadataFormatError, MissingMetadataError
from .timestamp_parser import TimestampParser


logger = Logger("MetadataLoader")


SIDECAR_COLUMNS: tuple[str, ...] = ("name", "timestamp", "width", "height")


class MetadataLoader:
    @classmethod
    def load_image_metas(
            cls,
            model: SparseModel,
            sidecar_path: Path | None = None,
            image_dir: Path | None = None,
    ) -> dict[int, ImageMeta]:
        """
        ImageMeta of every registered image, from a tab-separated sidecar manifest
        (name, timestamp, width, height) when given, otherwise from the image files.
        """
        if sidecar_path is not None:
            metas_by_name: dict[str, ImageMeta] = cls.read_sidecar_manifest(sidecar_path)
        elif image_dir is not None:
            metas_by_name = {
                image.name: cls.read_image_file_meta(image_dir / image.name, image.name)
                for image in model.images.values()
            }
        else:
            raise MissingMetadataError("Either a sidecar manifest or an image directory is required.")

        metas: dict[int, ImageMeta] = {}
        for image_id in sorted(model.images):
            name: str = model.images[image_id].name
            if name not in metas_by_name:
                raise MissingMetadataError(f"No metadata for registered image {image_id} ({name}).")
            metas[image_id] = metas_by_name[name]

        missing_time: int = sum(meta.timestamp is None for meta in metas.values())
        if missing_time:
            logger.warning(f"{missing_time} of {len(metas)} images have no capture timestamp")
        return metas

    @staticmethod
    def read_sidecar_manifest(path_to_file: Path) -> dict[str, ImageMeta]:
        """ The timestamp column holds UTC seconds or a 'YYYY:MM:DD HH:MM:SS' text; empty means unknown. """
        table: pd.DataFrame = FileReader.read_tsv_file(path_to_file)

        missing_columns: list[str] = [column for column in SIDECAR_COLUMNS if column not in table.columns]
        if missing_columns:
            raise MetadataFormatError(f"{path_to_file}: missing columns {missing_columns}.")

        metas: dict[str, ImageMeta] = {}
        for line_number, row in enumerate(table.to_dict(orient="records"), start=2):
            raw_timestamp: str = row["timestamp"].strip()
            try:
                timestamp: float | None = float(raw_timestamp) if raw_timestamp else None
            except ValueError:
                timestamp = TimestampParser.parse_timestamp(raw_timestamp)

            try:
                metas[row["name"]] = ImageMeta(
                    name=row["name"],
                    timestamp=timestamp,
                    width=int(row["width"]),
                    height=int(row["height"]),
                )
            except ValueError as e:
                raise MetadataFormatError(f"{path_to_file}:{line_number}: {e}")

        return metas

    @staticmethod
    def read_image_file_meta(path_to_image: Path, name: str) -> ImageMeta:
        try:
            with Image.open(path_to_image) as image:
                width, height = image.size
        except FileNotFoundError:
            raise MissingMetadataError(f"Image file not found: {path_to_image}")
        except (OSError, UnidentifiedImageError) as e:
            raise MetadataFormatError(f"Cannot read image {path_to_image}: {e}")

        return ImageMeta(
            name=name,
            timestamp=TimestampParser.read_exif_timestamp(path_to_image),
            width=width,
            height=height,
        )
