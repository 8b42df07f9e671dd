from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np
from numpy.typing import NDArray


class CameraModel(Enum):
    """ Supported camera models as (model id in the binary format, number of params). """
    SIMPLE_PINHOLE = (0, 3)
    PINHOLE = (1, 4)
    SIMPLE_RADIAL = (2, 4)
    RADIAL = (3, 5)
    OPENCV = (4, 8)

    @property
    def model_id(self) -> int:
        return self.value[0]

    @property
    def num_params(self) -> int:
        return self.value[1]

    @classmethod
    def from_id(cls, model_id: int) -> "CameraModel":
        for model in cls:
            if model.model_id == model_id:
                return model
        raise ValueError(f"Unknown camera model id {model_id}.")

    @classmethod
    def from_name(cls, name: str) -> "CameraModel":
        try:
            return cls[name]
        except KeyError:
            raise ValueError(f"Unknown camera model {name!r}.")


@dataclass(frozen=True, eq=False)
class CameraIntrinsics:
    """
    Intrinsics of one camera. Params follow the reconstruction tool's ordering:
    SIMPLE_PINHOLE f, cx, cy; PINHOLE fx, fy, cx, cy; SIMPLE_RADIAL f, cx, cy, k;
    RADIAL f, cx, cy, k1, k2; OPENCV fx, fy, cx, cy, k1, k2, p1, p2.
    """
    camera_id: int
    model: CameraModel
    width: int
    height: int
    params: NDArray[np.float64]

    def __post_init__(self) -> None:
        object.__setattr__(self, "params", np.asarray(self.params, dtype=np.float64).reshape(-1))

        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"Camera {self.camera_id}: dimensions must be positive ({self.width}x{self.height}).")
        if len(self.params) != self.model.num_params:
            raise ValueError(
                f"Camera {self.camera_id}: {self.model.name} expects {self.model.num_params} params, "
                f"got {len(self.params)}.")
        if not np.all(np.isfinite(self.params)):
            raise ValueError(f"Camera {self.camera_id}: params must be finite.")
        if self.focal_x <= 0 or self.focal_y <= 0:
            raise ValueError(f"Camera {self.camera_id}: focal lengths must be positive.")

    @property
    def focal_x(self) -> float:
        return float(self.params[0])

    @property
    def focal_y(self) -> float:
        if self.model in (CameraModel.PINHOLE, CameraModel.OPENCV):
            return float(self.params[1])
        return float(self.params[0])

    @property
    def principal_point(self) -> tuple[float, float]:
        if self.model in (CameraModel.PINHOLE, CameraModel.OPENCV):
            return float(self.params[2]), float(self.params[3])
        return float(self.params[1]), float(self.params[2])

    @cached_property
    def distortion(self) -> NDArray[np.float64]:
        """ Distortion as OPENCV-style (k1, k2, p1, p2); zeros for pinhole models. """
        coefficients: NDArray[np.float64] = np.zeros(4)

        if self.model == CameraModel.SIMPLE_RADIAL:
            coefficients[0] = self.params[3]
        elif self.model == CameraModel.RADIAL:
            coefficients[:2] = self.params[3:5]
        elif self.model == CameraModel.OPENCV:
            coefficients[:] = self.params[4:8]

        return coefficients

    @property
    def has_distortion(self) -> bool:
        return bool(np.any(self.distortion != 0))

    @property
    def aspect_ratio(self) -> float:
        return self.width / self.height

    def with_params(self, params: NDArray[np.float64], width: int, height: int) -> "CameraIntrinsics":
        return CameraIntrinsics(
            camera_id=self.camera_id,
            model=self.model,
            width=width,
            height=height,
            params=params,
        )
