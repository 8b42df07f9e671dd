from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import NDArray

from .pose import Pose


INVALID_POINT3D_ID: int = -1


@dataclass(frozen=True, eq=False)
class RegisteredImage:
    """
    A registered image with its 2D observations. xys is (N, 2) pixel coordinates,
    point3d_ids is (N,) with INVALID_POINT3D_ID for observations without a 3D point.
    """
    image_id: int
    name: str
    camera_id: int
    pose: Pose
    xys: NDArray[np.float64]
    point3d_ids: NDArray[np.int64]

    def __post_init__(self) -> None:
        object.__setattr__(self, "xys", np.asarray(self.xys, dtype=np.float64).reshape(-1, 2))
        object.__setattr__(self, "point3d_ids", np.asarray(self.point3d_ids, dtype=np.int64).reshape(-1))

        if len(self.xys) != len(self.point3d_ids):
            raise ValueError(
                f"Image {self.image_id}: {len(self.xys)} keypoints but {len(self.point3d_ids)} point ids.")

    def __len__(self) -> int:
        return len(self.xys)

    @cached_property
    def observed_mask(self) -> NDArray[np.bool_]:
        return self.point3d_ids != INVALID_POINT3D_ID

    @cached_property
    def observed_point3d_ids(self) -> NDArray[np.int64]:
        return self.point3d_ids[self.observed_mask]
