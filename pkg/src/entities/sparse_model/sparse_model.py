from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.typing import NDArray

from .camera_intrinsics import CameraIntrinsics
from .registered_image import RegisteredImage
from .point3d import Point3D


def _arrays_close(a: NDArray, b: NDArray, rtol: float) -> bool:
    if a.shape != b.shape:
        return False
    if rtol == 0:
        return bool(np.array_equal(a, b))
    return bool(np.allclose(a, b, rtol=rtol, atol=0))


@dataclass(frozen=True, eq=False)
class SparseModel:
    """ A parsed sparse reconstruction. Read-only after construction. """
    cameras: dict[int, CameraIntrinsics] = field(default_factory=dict)
    images: dict[int, RegisteredImage] = field(default_factory=dict)
    points: dict[int, Point3D] = field(default_factory=dict)

    def __repr__(self) -> str:
        return f"SparseModel(cameras={len(self.cameras)}, images={len(self.images)}, points={len(self.points)})"

    @cached_property
    def image_ids_by_name(self) -> dict[str, int]:
        return {image.name: image_id for image_id, image in self.images.items()}

    @cached_property
    def point_ids(self) -> NDArray[np.int64]:
        return np.array(sorted(self.points), dtype=np.int64)

    @cached_property
    def point_xyz(self) -> NDArray[np.float64]:
        """ (N, 3) coordinates ordered like point_ids. """
        if not self.points:
            return np.zeros((0, 3))
        return np.stack([self.points[int(point_id)].xyz for point_id in self.point_ids])

    def camera_of(self, image_id: int) -> CameraIntrinsics:
        return self.cameras[self.images[image_id].camera_id]

    def xyz_of(self, point3d_ids: NDArray[np.int64]) -> NDArray[np.float64]:
        """ Coordinates of the given point ids. """
        positions: NDArray[np.int64] = np.searchsorted(self.point_ids, point3d_ids)
        return self.point_xyz[positions]

    def equals(self, other: "SparseModel", rtol: float = 0.0) -> bool:
        """
        Field-by-field comparison. rtol=0 demands exact equality of every value,
        otherwise float fields are compared with the given relative tolerance.
        """
        if sorted(self.cameras) != sorted(other.cameras):
            return False
        if sorted(self.images) != sorted(other.images):
            return False
        if sorted(self.points) != sorted(other.points):
            return False

        for camera_id, camera in self.cameras.items():
            other_camera: CameraIntrinsics = other.cameras[camera_id]
            if (camera.model, camera.width, camera.height) != (other_camera.model, other_camera.width, other_camera.height):
                return False
            if not _arrays_close(camera.params, other_camera.params, rtol):
                return False

        for image_id, image in self.images.items():
            other_image: RegisteredImage = other.images[image_id]
            if (image.name, image.camera_id) != (other_image.name, other_image.camera_id):
                return False
            if not np.array_equal(image.point3d_ids, other_image.point3d_ids):
                return False
            if not (
                _arrays_close(image.pose.qvec, other_image.pose.qvec, rtol)
                and _arrays_close(image.pose.tvec, other_image.pose.tvec, rtol)
                and _arrays_close(image.xys, other_image.xys, rtol)
            ):
                return False

        for point_id, point in self.points.items():
            other_point: Point3D = other.points[point_id]
            if not (np.array_equal(point.rgb, other_point.rgb) and np.array_equal(point.track, other_point.track)):
                return False
            if not (
                _arrays_close(point.xyz, other_point.xyz, rtol)
                and _arrays_close(np.array([point.error]), np.array([other_point.error]), rtol)
            ):
                return False

        return True
