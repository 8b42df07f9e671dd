from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray


@dataclass(frozen=True, eq=False)
class SparseDepth:
    """ SfM depth samples of one image: pixels (N, 2), positive depths (N,), point ids (N,). """
    pixels: NDArray[np.float64]
    depths: NDArray[np.float64]
    point3d_ids: NDArray[np.int64]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pixels", np.asarray(self.pixels, dtype=np.float64).reshape(-1, 2))
        object.__setattr__(self, "depths", np.asarray(self.depths, dtype=np.float64).reshape(-1))
        object.__setattr__(self, "point3d_ids", np.asarray(self.point3d_ids, dtype=np.int64).reshape(-1))

        if not (len(self.pixels) == len(self.depths) == len(self.point3d_ids)):
            raise ValueError("Sparse depth arrays must have equal length.")
        if np.any(self.depths <= 0):
            raise ValueError("Sparse depths must be positive.")

    def __len__(self) -> int:
        return len(self.depths)
