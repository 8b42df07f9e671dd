from pathlib import Path

from src.entities import SparseModel
from src.services.utils import Logger, PathBuilder
from .binary_model_codec import BinaryModelCodec
from .text_model_codec import TextModelCodec
from .model_format import ModelFormat


logger = Logger("ModelWriter")


class ModelWriter:
    @staticmethod
    def write_model(model: SparseModel, path: Path | str, model_format: ModelFormat = ModelFormat.BINARY) -> Path:
        """ Write the three model files in ascending id order; AUTO writes binary. """
        model_dir: Path = Path(path)
        is_binary: bool = model_format != ModelFormat.TEXT
        cameras_path, images_path, points_path = PathBuilder.build_paths_to_model_files(model_dir, is_binary)
        codec = BinaryModelCodec if is_binary else TextModelCodec

        codec.write_cameras(model.cameras, cameras_path)
        codec.write_images(model.images, images_path)
        codec.write_points(model.points, points_path)

        logger.info(f"Model saved: {model_dir} ({'binary' if is_binary else 'text'}, {model!r})")
        return model_dir
