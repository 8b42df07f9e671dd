from pathlib import Path

import numpy as np

from src.entities import KeypointSet
from src.services.utils import FileWriter
from .model_exceptions import KeypointFormatError


class KeypointsIO:
    """ Keypoint text files: a "W H N" header line followed by N lines "x y". """

    @staticmethod
    def read_keypoints(path: Path) -> KeypointSet:
        if not path.is_file():
            raise KeypointFormatError(f"Keypoint file not found: {path}")

        lines: list[str] = [line for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]
        if not lines:
            raise KeypointFormatError(f"{path}: missing 'W H N' header.")

        try:
            width, height, count = (int(value) for value in lines[0].split())
        except ValueError:
            raise KeypointFormatError(f"{path}: header must be 'W H N', got {lines[0]!r}.")

        if len(lines) - 1 != count:
            raise KeypointFormatError(f"{path}: header declares {count} keypoints, found {len(lines) - 1}.")

        try:
            keypoints: np.ndarray = np.array(
                [[float(value) for value in line.split()] for line in lines[1:]], dtype=np.float64,
            ).reshape(count, 2)
            return KeypointSet(width=width, height=height, keypoints=keypoints)
        except ValueError as e:
            raise KeypointFormatError(f"{path}: invalid keypoint rows ({e}).")

    @staticmethod
    def write_keypoints(keypoints: KeypointSet, path: Path) -> Path:
        lines: list[str] = [f"{keypoints.width} {keypoints.height} {len(keypoints)}"]
        lines.extend(f"{x:.17g} {y:.17g}" for x, y in keypoints.keypoints)
        return FileWriter.write_lines(lines, path)
