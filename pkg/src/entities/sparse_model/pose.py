from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import NDArray
from scipy.spatial.transform import Rotation


QUATERNION_NORM_TOL: float = 1e-9


def qvec_to_rotmat(qvec: NDArray[np.float64]) -> NDArray[np.float64]:
    """ Rotation matrix of a unit quaternion (w, x, y, z). """
    w, x, y, z = qvec
    return np.array([
        [1 - 2 * y**2 - 2 * z**2, 2 * x * y - 2 * w * z, 2 * z * x + 2 * w * y],
        [2 * x * y + 2 * w * z, 1 - 2 * x**2 - 2 * z**2, 2 * y * z - 2 * w * x],
        [2 * z * x - 2 * w * y, 2 * y * z + 2 * w * x, 1 - 2 * x**2 - 2 * y**2],
    ])


def rotmat_to_qvec(rotation_matrix: NDArray[np.float64]) -> NDArray[np.float64]:
    """ Unit quaternion (w, x, y, z) with w >= 0 of a rotation matrix. """
    x, y, z, w = Rotation.from_matrix(rotation_matrix).as_quat()
    qvec: NDArray[np.float64] = np.array([w, x, y, z])
    if qvec[0] < 0:
        qvec = -qvec
    return qvec / np.linalg.norm(qvec)


@dataclass(frozen=True, eq=False)
class Pose:
    """ World-to-camera rigid transform: X_cam = R(qvec) @ X_world + tvec. """
    qvec: NDArray[np.float64]
    tvec: NDArray[np.float64]

    def __post_init__(self) -> None:
        object.__setattr__(self, "qvec", np.asarray(self.qvec, dtype=np.float64).reshape(4))
        object.__setattr__(self, "tvec", np.asarray(self.tvec, dtype=np.float64).reshape(3))

        if not (np.all(np.isfinite(self.qvec)) and np.all(np.isfinite(self.tvec))):
            raise ValueError("Pose components must be finite.")
        if abs(np.linalg.norm(self.qvec) - 1.0) > QUATERNION_NORM_TOL:
            raise ValueError(f"Pose quaternion is not unit-norm: |q| = {np.linalg.norm(self.qvec)!r}.")

    @classmethod
    def identity(cls) -> "Pose":
        return cls(qvec=np.array([1.0, 0.0, 0.0, 0.0]), tvec=np.zeros(3))

    @classmethod
    def from_matrix(cls, rotation_matrix: NDArray[np.float64], tvec: NDArray[np.float64]) -> "Pose":
        return cls(qvec=rotmat_to_qvec(rotation_matrix), tvec=tvec)

    @cached_property
    def rotation_matrix(self) -> NDArray[np.float64]:
        return qvec_to_rotmat(self.qvec)

    @cached_property
    def matrix(self) -> NDArray[np.float64]:
        """ 4x4 homogeneous world-to-camera matrix. """
        matrix: NDArray[np.float64] = np.eye(4)
        matrix[:3, :3] = self.rotation_matrix
        matrix[:3, 3] = self.tvec
        return matrix

    @cached_property
    def camera_center(self) -> NDArray[np.float64]:
        """ Camera center in world coordinates: -R^T t. """
        return -self.rotation_matrix.T @ self.tvec

    @property
    def viewing_direction(self) -> NDArray[np.float64]:
        """ Camera +z axis expressed in world coordinates. """
        return self.rotation_matrix[2, :]

    @property
    def down_axis(self) -> NDArray[np.float64]:
        """ Camera +y axis (image down) expressed in world coordinates. """
        return self.rotation_matrix[1, :]

    def transform(self, points_world: NDArray[np.float64]) -> NDArray[np.float64]:
        """ Map (N, 3) world points into the camera frame. """
        return np.asarray(points_world, dtype=np.float64) @ self.rotation_matrix.T + self.tvec
