import math

import numpy as np
from numpy.typing import NDArray
from PIL import Image

from src.entities import DepthMap, Placement
from .mining_exceptions import ResizeError


def _round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


class ImageResizer:
    """ Long side to target, same factor on the short side, content centered on a square canvas. """

    @staticmethod
    def placement_for(width: int, height: int, target: int) -> Placement:
        if target <= 0:
            raise ResizeError(f"Target size must be positive, got {target}.")
        if width <= 0 or height <= 0:
            raise ResizeError(f"Cannot resize a {width}x{height} image.")

        scale: float = target / max(width, height)
        content_width: int = max(1, min(target, _round_half_up(width * scale)))
        content_height: int = max(1, min(target, _round_half_up(height * scale)))

        return Placement(
            scale=scale,
            offset_x=(target - content_width) // 2,
            offset_y=(target - content_height) // 2,
            content_width=content_width,
            content_height=content_height,
            source_width=width,
            source_height=height,
            target=target,
        )

    @classmethod
    def resize_pad(
            cls,
            image: NDArray[np.uint8],
            target: int,
            pad_value: int = 0,
    ) -> tuple[NDArray[np.uint8], Placement]:
        """ Bilinear resize of an (H, W) or (H, W, C) uint8 image onto a padded target x target canvas. """
        image = np.asarray(image, dtype=np.uint8)
        if image.ndim < 2 or image.shape[0] == 0 or image.shape[1] == 0:
            raise ResizeError(f"Cannot resize an image of shape {image.shape}.")

        height, width = image.shape[:2]
        placement: Placement = cls.placement_for(width, height, target)

        if (placement.content_width, placement.content_height) == (width, height):
            content: NDArray[np.uint8] = image
        else:
            resized: Image.Image = Image.fromarray(image).resize(
                (placement.content_width, placement.content_height), Image.Resampling.BILINEAR)
            content = np.asarray(resized, dtype=np.uint8)

        canvas: NDArray[np.uint8] = np.full((target, target, *image.shape[2:]), pad_value, dtype=np.uint8)
        canvas[cls._content_slice(placement)] = content
        return canvas, placement

    @classmethod
    def resize_pad_depth(cls, depth: DepthMap, placement: Placement) -> DepthMap:
        """ Nearest-neighbour resize of depth and validity; padding is invalid. """
        if (depth.width, depth.height) != (placement.source_width, placement.source_height):
            raise ResizeError(
                f"Depth {depth.width}x{depth.height} does not match the placement source "
                f"{placement.source_width}x{placement.source_height}.")

        content: DepthMap = cls.resample_depth(depth, placement.content_width, placement.content_height)

        canvas_values: NDArray[np.float64] = np.zeros((placement.target, placement.target))
        canvas_valid: NDArray[np.bool_] = np.zeros((placement.target, placement.target), dtype=bool)
        canvas_values[cls._content_slice(placement)] = content.values
        canvas_valid[cls._content_slice(placement)] = content.valid
        return DepthMap(values=canvas_values, valid=canvas_valid)

    @staticmethod
    def resample_depth(depth: DepthMap, width: int, height: int) -> DepthMap:
        """ Nearest-neighbour resampling: every output pixel center takes the source pixel it falls in. """
        if (depth.width, depth.height) == (width, height):
            return depth

        source_cols: NDArray[np.int64] = np.minimum(
            ((np.arange(width) + 0.5) * depth.width / width).astype(np.int64), depth.width - 1)
        source_rows: NDArray[np.int64] = np.minimum(
            ((np.arange(height) + 0.5) * depth.height / height).astype(np.int64), depth.height - 1)

        return DepthMap(
            values=depth.values[np.ix_(source_rows, source_cols)],
            valid=depth.valid[np.ix_(source_rows, source_cols)],
        )

    @classmethod
    def content_mask(cls, placement: Placement) -> NDArray[np.bool_]:
        mask: NDArray[np.bool_] = np.zeros((placement.target, placement.target), dtype=bool)
        mask[cls._content_slice(placement)] = True
        return mask

    @staticmethod
    def _content_slice(placement: Placement) -> tuple[slice, slice]:
        return (
            slice(placement.offset_y, placement.offset_y + placement.content_height),
            slice(placement.offset_x, placement.offset_x + placement.content_width),
        )
