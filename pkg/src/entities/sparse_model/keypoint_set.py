from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray


@dataclass(frozen=True, eq=False)
class KeypointSet:
    """ Keypoint centers (N, 2) of one image of the given size. """
    width: int
    height: int
    keypoints: NDArray[np.float64]

    def __post_init__(self) -> None:
        object.__setattr__(self, "keypoints", np.asarray(self.keypoints, dtype=np.float64).reshape(-1, 2))

        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"Keypoint image dimensions must be positive ({self.width}x{self.height}).")
        if not np.all(np.isfinite(self.keypoints)):
            raise ValueError("Keypoint coordinates must be finite.")

    def __len__(self) -> int:
        return len(self.keypoints)

    @property
    def diagonal(self) -> float:
        return float(np.hypot(self.width, self.height))
