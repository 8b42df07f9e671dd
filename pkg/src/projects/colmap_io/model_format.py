from enum import Enum
from pathlib import Path

from src.services.utils import Constants
from .model_exceptions import MissingModelFileError, MixedModelFormatError


class ModelFormat(Enum):
    BINARY = "BINARY"
    TEXT = "TEXT"
    AUTO = "AUTO"

    @classmethod
    def from_name(cls, name: str) -> "ModelFormat":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"Unknown model format {name!r}, expected one of BINARY, TEXT, AUTO.")


def detect_model_format(model_dir: Path) -> ModelFormat:
    """ Resolve AUTO by the files present; a directory holding parts of both sets is an error. """
    names = Constants.file_names
    binary_files: list[str] = [names.CAMERAS_BIN_FILE, names.IMAGES_BIN_FILE, names.POINTS_BIN_FILE]
    text_files: list[str] = [names.CAMERAS_TXT_FILE, names.IMAGES_TXT_FILE, names.POINTS_TXT_FILE]

    binary_present: list[bool] = [(model_dir / name).is_file() for name in binary_files]
    text_present: list[bool] = [(model_dir / name).is_file() for name in text_files]

    if all(binary_present) and not any(text_present):
        return ModelFormat.BINARY
    if all(text_present) and not any(binary_present):
        return ModelFormat.TEXT

    if all(binary_present) and all(text_present):
        raise MixedModelFormatError(f"{model_dir} holds both binary and text models, pass the format explicitly.")
    if any(binary_present) or any(text_present):
        present: list[str] = [
            name for name, flag in zip(binary_files + text_files, binary_present + text_present) if flag
        ]
        raise MixedModelFormatError(f"{model_dir} holds an incomplete or mixed model file set: {present}.")

    raise MissingModelFileError(f"No model files found in {model_dir}.")
