from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray


NO_TRIANGLE: int = -1


@dataclass(frozen=True, eq=False)
class WarpOutput:
    """
    Rendered target view: rgb (H, W, 3) uint8, mask (H, W) true where some triangle
    covers the pixel center, depth (H, W) target-camera z where covered (0 elsewhere),
    triangle_ids (H, W) index of the winning triangle or NO_TRIANGLE.
    """
    rgb: NDArray[np.uint8]
    mask: NDArray[np.bool_]
    depth: NDArray[np.float64]
    triangle_ids: NDArray[np.int64]

    @property
    def height(self) -> int:
        return int(self.mask.shape[0])

    @property
    def width(self) -> int:
        return int(self.mask.shape[1])

    @property
    def coverage(self) -> float:
        return float(np.mean(self.mask)) if self.mask.size else 0.0
