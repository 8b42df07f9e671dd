from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray


@dataclass(frozen=True, eq=False)
class Point3D:
    """ A triangulated point; track rows are (image_id, point2d_index). """
    point3d_id: int
    xyz: NDArray[np.float64]
    rgb: NDArray[np.uint8]
    error: float
    track: NDArray[np.int64]

    def __post_init__(self) -> None:
        object.__setattr__(self, "xyz", np.asarray(self.xyz, dtype=np.float64).reshape(3))
        object.__setattr__(self, "rgb", np.asarray(self.rgb, dtype=np.uint8).reshape(3))
        object.__setattr__(self, "error", float(self.error))
        object.__setattr__(self, "track", np.asarray(self.track, dtype=np.int64).reshape(-1, 2))

    @property
    def image_ids(self) -> NDArray[np.int64]:
        return self.track[:, 0]

    @property
    def point2d_indexes(self) -> NDArray[np.int64]:
        return self.track[:, 1]
