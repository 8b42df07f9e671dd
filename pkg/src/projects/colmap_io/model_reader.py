from pathlib import Path

from src.entities import SparseModel
from src.services.utils import Logger, PathBuilder, execution_time_logger
from .binary_model_codec import BinaryModelCodec
from .text_model_codec import TextModelCodec
from .model_format import ModelFormat, detect_model_format
from .model_validator import ModelValidator, ValidationReport
from .model_exceptions import MissingModelFileError


logger = Logger("ModelReader")


class ModelReader:
    @classmethod
    def parse_model(
            cls,
            path: Path | str,
            model_format: ModelFormat = ModelFormat.AUTO,
            lenient: bool = False,
    ) -> SparseModel:
        model, _ = cls.parse_model_with_report(path, model_format, lenient)
        return model

    @staticmethod
    @execution_time_logger
    def parse_model_with_report(
            path: Path | str,
            model_format: ModelFormat = ModelFormat.AUTO,
            lenient: bool = False,
    ) -> tuple[SparseModel, ValidationReport]:
        """
        Read cameras, images and points from a model directory (or any one of its
        files) and validate the cross-references.
        """
        model_dir: Path = Path(path)
        if model_dir.is_file():
            model_dir = model_dir.parent
        if not model_dir.is_dir():
            raise MissingModelFileError(f"Model directory not found: {model_dir}")

        if model_format == ModelFormat.AUTO:
            model_format = detect_model_format(model_dir)

        is_binary: bool = model_format == ModelFormat.BINARY
        cameras_path, images_path, points_path = PathBuilder.build_paths_to_model_files(model_dir, is_binary)
        codec = BinaryModelCodec if is_binary else TextModelCodec

        for file_path in (cameras_path, images_path, points_path):
            if not file_path.is_file():
                raise MissingModelFileError(f"Model file not found: {file_path}")

        model: SparseModel = SparseModel(
            cameras=codec.read_cameras(cameras_path),
            images=codec.read_images(images_path),
            points=codec.read_points(points_path),
        )
        model, report = ModelValidator.validate_model(model, lenient=lenient)

        logger.info(f"Parsed {model_format.value.lower()} model {model_dir}: {model!r}")
        return model, report
