from fractions import Fraction
from typing import Any, Sequence

import numpy as np
from numpy.typing import NDArray

from src.entities import KeypointSet
from .model_exceptions import MaskingParameterError


class KeypointsMasker:
    @staticmethod
    def mask_border_keypoints(keypoints: KeypointSet, border_fraction: float) -> KeypointSet:
        """
        Drop keypoints closer than border_fraction * image diagonal to the nearest
        edge (strict '<') and any keypoint outside the image. Survivor order is kept.
        """
        if not 0 <= border_fraction < 0.5:
            raise MaskingParameterError(f"Border fraction must be in [0, 0.5), got {border_fraction}.")

        xs: NDArray[np.float64] = keypoints.keypoints[:, 0]
        ys: NDArray[np.float64] = keypoints.keypoints[:, 1]
        width, height = keypoints.width, keypoints.height

        inside: NDArray[np.bool_] = (xs >= 0) & (xs < width) & (ys >= 0) & (ys < height)
        edge_distance: NDArray[np.float64] = np.maximum(
            np.minimum.reduce([xs, ys, width - 1 - xs, height - 1 - ys]), 0.0,
        ) if len(keypoints) else np.zeros(0)

        keep: NDArray[np.bool_] = inside & ~(edge_distance < border_fraction * keypoints.diagonal)
        return KeypointSet(width=width, height=height, keypoints=keypoints.keypoints[keep])

    @staticmethod
    def watermark_trigger(pair_labels: Sequence[tuple[Any, bool]], ratio: float = 0.1) -> bool:
        """ True iff watermark pairs make up at least the given share of all pairs. """
        if not pair_labels:
            raise MaskingParameterError("Watermark trigger needs at least one labelled pair.")

        watermark_count: int = sum(1 for _, is_watermark in pair_labels if is_watermark)
        return Fraction(watermark_count, len(pair_labels)) >= Fraction(str(ratio))
